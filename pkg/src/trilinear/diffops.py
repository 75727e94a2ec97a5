"""Classical difference operators on lattice functions ``a(n, m)``.

With ``p = s1 + 1``, ``s = s2 + 1``, ``r = s3 - 1``:

    L+ a(n,m) = (p + n) a(n+2,m) + (s + m) a(n,m+2) + (r - n - m) a(n,m)
    L- a(n,m) = (p - n) a(n-2,m) + (s - m) a(n,m-2) + (r + n + m) a(n,m)

so that the classical E- and F-invariance equations read ``L+ a = 0``, ``L- a = 0``.
``reading="n"`` swaps the middle coefficients to ``s + n`` / ``s - n``; that
variant breaks both the correspondence with the invariance equations and the
commutator identity ``[L+, L-] = 2 (L+ - L-)``, and is kept only for comparison.

Discrete derivatives use the lattice step 2: ``Delta f(n) = f(n+2) - f(n)``,
``Nabla f(n) = f(n) - f(n-2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from trilinear.kernel import KernelTable
from trilinear.representation import TripleParams

READINGS = ("m", "n")


@dataclass(frozen=True)
class DiffOpParams:
    p: complex
    s: complex
    r: complex

    @classmethod
    def from_triple(cls, triple: TripleParams) -> "DiffOpParams":
        s1, s2, s3 = triple.s
        return cls(s1 + 1, s2 + 1, s3 - 1)


@dataclass
class LatticeFunction:
    """Finitely supported function on ``{(n, m): n = eps1, m = eps2 (mod 2)}``."""

    values: dict = field(default_factory=dict)
    eps1: int = 0
    eps2: int = 0

    def __post_init__(self):
        for n, m in self.values:
            if (n - self.eps1) % 2 or (m - self.eps2) % 2:
                raise ValueError(f"point {(n, m)} violates the lattice parity ({self.eps1}, {self.eps2})")

    def __getitem__(self, point):
        return self.values.get(point, 0)

    @property
    def support(self):
        return [p for p, v in self.values.items() if v != 0]

    @property
    def support_bound(self) -> int:
        """Smallest ``B`` with the support inside ``|n|, |m|, |n+m| <= B``."""
        return max((max(abs(n), abs(m), abs(n + m)) for n, m in self.support), default=0)

    def norm(self) -> float:
        return max((abs(complex(v)) for v in self.values.values()), default=0.0)

    def like(self, values) -> "LatticeFunction":
        return LatticeFunction({p: v for p, v in values.items() if v != 0}, self.eps1, self.eps2)

    def __sub__(self, other):
        keys = set(self.values) | set(other.values)
        return self.like({k: self[k] - other[k] for k in keys})

    def __add__(self, other):
        keys = set(self.values) | set(other.values)
        return self.like({k: self[k] + other[k] for k in keys})

    def __rmul__(self, c):
        return self.like({k: c * v for k, v in self.values.items()})


def _targets(a: LatticeFunction, offsets):
    return {(n - dn, m - dm) for (n, m) in a.support for dn, dm in offsets}


def apply_L_plus(params: DiffOpParams, a: LatticeFunction, reading: str = "m") -> LatticeFunction:
    p, s, r = params.p, params.s, params.r
    out = {}
    for n, m in _targets(a, [(0, 0), (2, 0), (0, 2)]):
        mid = s + m if reading == "m" else s + n
        out[(n, m)] = (p + n) * a[(n + 2, m)] + mid * a[(n, m + 2)] + (r - n - m) * a[(n, m)]
    return a.like(out)


def apply_L_minus(params: DiffOpParams, a: LatticeFunction, reading: str = "m") -> LatticeFunction:
    p, s, r = params.p, params.s, params.r
    out = {}
    for n, m in _targets(a, [(0, 0), (-2, 0), (0, -2)]):
        mid = s - m if reading == "m" else s - n
        out[(n, m)] = (p - n) * a[(n - 2, m)] + mid * a[(n, m - 2)] + (r + n + m) * a[(n, m)]
    return a.like(out)


def commutator_residual(params: DiffOpParams, a: LatticeFunction, reading: str = "m") -> float:
    """``|| [L+, L-] a - 2 (L+ - L-) a ||_max`` divided by the largest max-norm among the
    intermediate functions (0 for ``a = 0``)."""
    lp, lm = apply_L_plus(params, a, reading), apply_L_minus(params, a, reading)
    lpm = apply_L_plus(params, lm, reading)
    lmp = apply_L_minus(params, lp, reading)
    res = (lpm - lmp) - 2 * (lp - lm)
    scale = max(f.norm() for f in (a, lp, lm, lpm, lmp))
    return res.norm() / scale if scale else 0.0


# discrete derivatives ---------------------------------------------------------------


def delta_n(a: LatticeFunction) -> LatticeFunction:
    pts = _targets(a, [(0, 0), (2, 0)])
    return a.like({(n, m): a[(n + 2, m)] - a[(n, m)] for n, m in pts})


def delta_m(a: LatticeFunction) -> LatticeFunction:
    pts = _targets(a, [(0, 0), (0, 2)])
    return a.like({(n, m): a[(n, m + 2)] - a[(n, m)] for n, m in pts})


def nabla_n(a: LatticeFunction) -> LatticeFunction:
    pts = _targets(a, [(0, 0), (-2, 0)])
    return a.like({(n, m): a[(n, m)] - a[(n - 2, m)] for n, m in pts})


def nabla_m(a: LatticeFunction) -> LatticeFunction:
    pts = _targets(a, [(0, 0), (0, -2)])
    return a.like({(n, m): a[(n, m)] - a[(n, m - 2)] for n, m in pts})


def _weighted(a: LatticeFunction, weight) -> LatticeFunction:
    return a.like({(n, m): weight(n, m) * v for (n, m), v in a.values.items()})


def gradient_form_residual(params: DiffOpParams, a: LatticeFunction) -> tuple[float, float]:
    """Compare ``L+- a`` with the derivative forms

        ((n+p) Delta_n + (m+s) Delta_m) a + (p+s+r) a
        ((n-p) Nabla_n + (m-s) Nabla_m) a + (p+s+r) a

    and return both max-norm differences relative to the larger side."""
    p, s, r = params.p, params.s, params.r
    plus = (
        _weighted(delta_n(a), lambda n, m: n + p)
        + _weighted(delta_m(a), lambda n, m: m + s)
        + _weighted(a, lambda n, m: p + s + r)
    )
    minus = (
        _weighted(nabla_n(a), lambda n, m: n - p)
        + _weighted(nabla_m(a), lambda n, m: m - s)
        + _weighted(a, lambda n, m: p + s + r)
    )
    out = []
    for form, op in ((plus, apply_L_plus(params, a)), (minus, apply_L_minus(params, a))):
        scale = max(form.norm(), op.norm())
        out.append((form - op).norm() / scale if scale else 0.0)
    return tuple(out)


# annihilation of the kernel ------------------------------------------------------------


def annihilation_residual(params: DiffOpParams, table: KernelTable) -> tuple[float, float]:
    """Per-point normalized ``L+ a`` and ``L- a`` on a kernel table, at points whose
    stencil lies in the table; returns the two maxima."""
    vals = table.values
    p, s, r = params.p, params.s, params.r
    worst = [0.0, 0.0]
    for n, m in vals:
        stencils = (
            [((n + 2, m), p + n), ((n, m + 2), s + m), ((n, m), r - n - m)],
            [((n - 2, m), p - n), ((n, m - 2), s - m), ((n, m), r + n + m)],
        )
        for i, st in enumerate(stencils):
            if any(pt not in vals for pt, _ in st):
                continue
            terms = [complex(c * vals[pt]) for pt, c in st]
            scale = max(abs(t) for t in terms)
            if scale:
                worst[i] = max(worst[i], abs(sum(terms)) / scale)
    return tuple(worst)


# diagonal equation ---------------------------------------------------------------------


def hypergeometric_constant(params: DiffOpParams, form: str = "consistent"):
    """Zeroth-order coefficient of the diagonal equation.

    ``"consistent"`` is ``(p+s+r)(p+s-r-2)``, the value forced by the three-term
    antidiagonal relation; ``"short"`` is ``-r(r-2)``.
    """
    p, s, r = params.p, params.s, params.r
    if form == "consistent":
        return (p + s + r) * (p + s - r - 2)
    if form == "short":
        return -r * (r - 2)
    raise ValueError(f"unknown form {form!r}")


def diagonal_hypergeometric_residual(params: DiffOpParams, table: KernelTable, k: int, form: str = "consistent") -> float:
    """Max normalized residual of

        (n+p)(n+s-k) Nabla Delta b + 2(pn + sn - pk) Nabla b + c b = 0,   b(n) = a(n, k-n),

    over the admissible ``n`` on the diagonal ``n + m = k`` (``c`` per
    :func:`hypergeometric_constant`)."""
    p, s = params.p, params.s
    c0 = hypergeometric_constant(params, form)
    diag = {n: v for (n, m), v in table.values.items() if n + m == k}
    if len(diag) < 3:
        raise ValueError(f"diagonal n + m = {k} has fewer than 3 points in the table")
    worst = 0.0
    for n in sorted(diag):
        if n - 2 not in diag or n + 2 not in diag:
            continue
        second = (n + p) * (n + s - k)
        first = 2 * (p * n + s * n - p * k)
        # expanded in b(n+2), b(n), b(n-2) so the normalization sees each term
        terms = [
            complex(second * diag[n + 2]),
            complex((-2 * second + first + c0) * diag[n]),
            complex((second - first) * diag[n - 2]),
        ]
        scale = max(abs(t) for t in terms)
        if scale:
            worst = max(worst, abs(sum(terms)) / scale)
    return worst
