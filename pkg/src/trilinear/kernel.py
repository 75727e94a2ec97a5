"""Invariant triple kernel ``a(n, m) = f(v_n (x) v_m (x) v_{-n-m})``.

The defining equations, all at a lattice point ``(n, m)``:

* symmetry   ``a(n, m) = a(-n, -m)``
* E-inv      ``f(E(v_n (x) v_m (x) v_{-n-m-2})) = 0``
* F-inv      ``f(F(v_n (x) v_m (x) v_{-n-m+2})) = 0``
* bonbon     three-term relation along ``n + m = const`` obtained by eliminating
             the neighbours off the antidiagonal from one F- and two E-equations.

Every coefficient is produced by :func:`equation_row`, so the recursive builder,
the residual check and the linear-system oracle share one source of truth.

Construction (:func:`build_kernel`): seed two values on the base antidiagonal,
sweep it with the bonbon recurrence, reflect it through the symmetry, raise
levels with the F-equation, then fill negative levels by symmetry.  In classical
mode every q-number becomes its argument and every q-power becomes 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from trilinear.errors import BreakdownError, DegenerateSeedError
from trilinear.qspecial import DeformationParameter, q_power
from trilinear.representation import (
    DIVISOR_TOL,
    ModuleParams,
    TripleParams,
    _bracket,
    triple_e_coeffs,
    triple_f_coeffs,
)

EQUATIONS = ("symmetry", "E", "F", "bonbon")

__all__ = [
    "EQUATIONS",
    "KernelTable",
    "LatticeWindow",
    "ModuleParams",
    "ResidualEntry",
    "ResidualReport",
    "TripleParams",
    "build_kernel",
    "equation_row",
    "extend_up",
    "residuals",
    "seed_diagonal",
    "step_antidiagonal",
    "step_antidiagonal_back",
]


@dataclass(frozen=True)
class LatticeWindow:
    """Diamond ``|n|, |m|, |n+m| <= W`` on the lattice ``n = eps1, m = eps2 (mod 2)``."""

    W: int
    eps1: int = 0
    eps2: int = 0

    def __post_init__(self):
        if self.W < 0:
            raise ValueError("window size must be nonnegative")

    def __contains__(self, point) -> bool:
        n, m = point
        return (
            (n - self.eps1) % 2 == 0
            and (m - self.eps2) % 2 == 0
            and abs(n) <= self.W
            and abs(m) <= self.W
            and abs(n + m) <= self.W
        )

    def points(self) -> list[tuple[int, int]]:
        return [
            (n, m)
            for n in range(-self.W, self.W + 1)
            for m in range(-self.W, self.W + 1)
            if (n, m) in self
        ]

    def level(self, L: int) -> list[tuple[int, int]]:
        """Points with ``n + m = L``, sorted by ``n``."""
        return [(n, L - n) for n in range(-self.W, self.W + 1) if (n, L - n) in self]


# equation coefficients ----------------------------------------------------------


def equation_row(dp: DeformationParameter, triple: TripleParams, equation: str, point) -> dict:
    """Coefficients ``{lattice point: c}`` of one equation instantiated at ``point``;
    the equation reads ``sum c * a(point) = 0``."""
    n, m = point
    if equation == "E":
        c1, c2, c3 = triple_e_coeffs(dp, triple, (n, m, -n - m - 2))
        return {(n + 2, m): c1, (n, m + 2): c2, (n, m): c3}
    if equation == "F":
        c1, c2, c3 = triple_f_coeffs(dp, triple, (n, m, -n - m + 2))
        return {(n - 2, m): c1, (n, m - 2): c2, (n, m): c3}
    if equation == "symmetry":
        if (n, m) == (-n, -m):
            return {}
        return {(n, m): dp.num(1), (-n, -m): dp.num(-1)}
    if equation == "bonbon":
        return _bonbon_row(dp, triple, n, m)
    raise ValueError(f"unknown equation {equation!r}")


def _bonbon_row(dp, triple, n, m):
    s1, s2, s3 = triple.s
    b = lambda x: _bracket(dp, x)  # noqa: E731
    centre = (
        b((s3 - n - m + 1) / 2) * b((s3 + n + m - 1) / 2)
        - q_power(dp, -m) * b((s1 + n - 1) / 2) * b((s1 - n + 1) / 2)
        - q_power(dp, n) * b((s2 - m + 1) / 2) * b((s2 + m - 1) / 2)
    )
    left = q_power(dp, n - m - 2) * b((s1 - n + 1) / 2) * b((s2 + m + 1) / 2)
    right = b((s2 - m + 1) / 2) * b((s1 + n + 1) / 2)
    return {(n, m): centre, (n - 2, m + 2): -left, (n + 2, m - 2): -right}


def _solve_for(row: dict, target, values: dict, location):
    """Value at ``target`` that makes ``row`` vanish given the other entries."""
    lead = row[target]
    if abs(complex(lead)) < DIVISOR_TOL:
        raise BreakdownError(f"leading coefficient {complex(lead):.3e} ~ 0", location=location)
    acc = 0
    for point, c in row.items():
        if point != target:
            acc += c * values[point]
    return -acc / lead


# antidiagonal ----------------------------------------------------------------------


def step_antidiagonal(dp, triple, a_prev, a_cur, point):
    """Given ``a(n-2, m+2)`` and ``a(n, m)``, return ``a(n+2, m-2)`` from the bonbon
    relation at ``(n, m)``."""
    n, m = point
    row = _bonbon_row(dp, triple, n, m)
    return _solve_for(row, (n + 2, m - 2), {(n - 2, m + 2): a_prev, (n, m): a_cur}, point)


def step_antidiagonal_back(dp, triple, a_next, a_cur, point):
    """Given ``a(n+2, m-2)`` and ``a(n, m)``, return ``a(n-2, m+2)``."""
    n, m = point
    row = _bonbon_row(dp, triple, n, m)
    return _solve_for(row, (n - 2, m + 2), {(n + 2, m - 2): a_next, (n, m): a_cur}, point)


@dataclass(frozen=True)
class Seed:
    case: str
    entries: tuple  # ((point, value), (point, value))

    @property
    def point(self):
        return self.entries[0][0]

    @property
    def value(self):
        return self.entries[0][1]


def seed_ratio_origin(dp: DeformationParameter, triple: TripleParams):
    """``a(2, -2) / a(0, 0)`` from the seeding identity at the origin,

        ([(s3+1)/2][(s3-1)/2] - [(s1+1)/2][(s1-1)/2] - [(s2+1)/2][(s2-1)/2]) a(0,0)
            = 2 [(s1+1)/2][(s2+1)/2] a(2,-2).
    """
    s1, s2, s3 = triple.s
    b = lambda x: _bracket(dp, x)  # noqa: E731
    lhs = b((s3 + 1) / 2) * b((s3 - 1) / 2) - b((s1 + 1) / 2) * b((s1 - 1) / 2) - b((s2 + 1) / 2) * b((s2 - 1) / 2)
    rhs = 2 * b((s1 + 1) / 2) * b((s2 + 1) / 2)
    if abs(complex(rhs)) < DIVISOR_TOL:
        raise DegenerateSeedError("[(s1+1)/2][(s2+1)/2] ~ 0", location=(2, -2))
    return lhs / rhs


def seed_diagonal(dp: DeformationParameter, triple: TripleParams, scale=1) -> Seed:
    """Two starting values on the base antidiagonal.

    * eps = (0, 0, *): ``a(0,0) = scale``, ``a(2,-2)`` from :func:`seed_ratio_origin`.
    * eps = (1, 1, *): ``a(1,-1) = a(-1,1) = scale``.
    * eps1 != eps2: the base level is ``n + m = 1``; ``a(eps1, 1-eps1) = scale`` and a
      second value from the F-equation at that point, whose level ``-1`` neighbours
      are folded back onto level 1 by the symmetry.
    """
    if not triple.parity_compatible:
        raise DegenerateSeedError("parity-incompatible triple has no weight-zero points")
    e1, e2, _ = triple.eps
    scale = dp.num(scale)
    if e1 == e2 == 0:
        ratio = seed_ratio_origin(dp, triple)
        return Seed("i", (((0, 0), scale), ((2, -2), ratio * scale)))
    if e1 == e2 == 1:
        return Seed("ii", (((1, -1), scale), ((-1, 1), scale)))
    p0 = (e1, 1 - e1)
    row = equation_row(dp, triple, "F", p0)
    folded: dict = {}
    for (n, m), c in row.items():
        key = (n, m) if n + m == 1 else (-n, -m)
        folded[key] = folded.get(key, 0) + c
    (other,) = [p for p in folded if p != p0]
    if abs(complex(folded[other])) < DIVISOR_TOL:
        raise DegenerateSeedError("folded F-coefficient ~ 0", location=other)
    value = -folded[p0] * scale / folded[other]
    return Seed("odd", ((p0, scale), (other, value)))


def _sweep_base_level(dp, triple, window: LatticeWindow, seed: Seed) -> dict:
    values = dict(seed.entries)
    e1, e2, _ = triple.eps
    if e1 == e2:
        # walk n upwards from the seed pair; the rest of level 0 is the mirror image
        (p, _), (p2, _) = seed.entries
        lo, hi = sorted([p, p2])
        cur = hi
        prev = lo
        while (cur[0] + 2, cur[1] - 2) in window:
            values[(cur[0] + 2, cur[1] - 2)] = step_antidiagonal(dp, triple, values[prev], values[cur], cur)
            prev, cur = cur, (cur[0] + 2, cur[1] - 2)
        for (n, m) in list(values):
            values[(-n, -m)] = values[(n, m)]
        return {p: v for p, v in values.items() if p in window}
    # odd base level: sweep both directions from the seed pair
    (p0, _), (p1, _) = seed.entries
    lo, hi = sorted([p0, p1])
    prev, cur = lo, hi
    while (cur[0] + 2, cur[1] - 2) in window:
        values[(cur[0] + 2, cur[1] - 2)] = step_antidiagonal(dp, triple, values[prev], values[cur], cur)
        prev, cur = cur, (cur[0] + 2, cur[1] - 2)
    nxt, cur = hi, lo
    while (cur[0] - 2, cur[1] + 2) in window:
        values[(cur[0] - 2, cur[1] + 2)] = step_antidiagonal_back(dp, triple, values[nxt], values[cur], cur)
        nxt, cur = cur, (cur[0] - 2, cur[1] + 2)
    return {p: v for p, v in values.items() if p in window}


def extend_up(dp: DeformationParameter, triple: TripleParams, values: dict, level: int, window: LatticeWindow):
    """Entries at level ``level + 2`` from the F-equation at each target point.

    Returns ``(new_entries, omitted)``, where ``omitted`` lists window points whose
    F-stencil needs values that are not available.
    """
    new, omitted = {}, []
    for target in window.level(level + 2):
        row = equation_row(dp, triple, "F", target)
        if any(p not in values for p in row if p != target):
            omitted.append(target)
            continue
        new[target] = _solve_for(row, target, values, target)
    return new, omitted


# tables ------------------------------------------------------------------------


@dataclass
class KernelTable:
    triple: TripleParams
    dp: DeformationParameter
    window: LatticeWindow
    values: dict
    seed: Seed | None
    trivial: bool = False
    omitted: list = field(default_factory=list)

    def __getitem__(self, point):
        return self.values.get(point, 0)

    def points(self):
        return sorted(self.values)

    def normalized(self, point=None) -> dict:
        """Values divided by the entry at ``point`` (default: the seed point)."""
        point = point if point is not None else self.seed.point
        ref = self.values[point]
        return {p: v / ref for p, v in self.values.items()}

    def scaled(self, factor) -> "KernelTable":
        return KernelTable(
            self.triple, self.dp, self.window, {p: v * factor for p, v in self.values.items()},
            self.seed, self.trivial, list(self.omitted),
        )


def build_kernel(dp: DeformationParameter, triple: TripleParams, W: int, seed_scale=1) -> KernelTable:
    """Kernel on the diamond window of size ``W`` (even, >= 4)."""
    if W < 4 or W % 2:
        raise ValueError("window size W must be an even integer >= 4")
    e1, e2, _ = triple.eps
    window = LatticeWindow(W, e1, e2)
    if not triple.parity_compatible:
        return KernelTable(triple, dp, window, {p: dp.num(0) for p in window.points()}, None, trivial=True)

    seed = seed_diagonal(dp, triple, seed_scale)
    values = _sweep_base_level(dp, triple, window, seed)
    base = 0 if e1 == e2 else 1
    omitted = []
    # odd base: level -1 is the mirror of level 1, and feeds nothing upward
    level = base
    while level + 2 <= W:
        new, missed = extend_up(dp, triple, values, level, window)
        values.update(new)
        omitted.extend(missed)
        level += 2
    for (n, m) in list(values):
        if n + m > 0:
            values[(-n, -m)] = values[(n, m)]
    return KernelTable(triple, dp, window, values, seed, trivial=False, omitted=omitted)


# residuals -----------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualEntry:
    equation: str
    max_abs: float
    mean_abs: float
    normalization: float
    worst: tuple | None
    count: int


@dataclass(frozen=True)
class ResidualReport:
    entries: tuple

    def __getitem__(self, equation) -> ResidualEntry:
        for e in self.entries:
            if e.equation == equation:
                return e
        raise KeyError(equation)

    def max(self) -> float:
        return max(e.max_abs for e in self.entries)

    def passes(self, tol: float) -> bool:
        return all(e.max_abs < tol for e in self.entries)

    def to_list(self) -> list:
        return [
            {
                "equation": e.equation,
                "max_abs": e.max_abs,
                "mean_abs": e.mean_abs,
                "worst": list(e.worst) if e.worst is not None else None,
                "count": e.count,
            }
            for e in self.entries
        ]


def point_residual(dp, triple, equation, point, values) -> float | None:
    """Normalized residual ``|sum c a| / max |c a|`` of one equation, or None when the
    stencil leaves the table."""
    row = equation_row(dp, triple, equation, point)
    if not row or any(p not in values for p in row):
        return None
    terms = [complex(c * values[p]) for p, c in row.items()]
    scale = max(abs(t) for t in terms)
    if scale == 0:
        return 0.0
    return abs(sum(terms)) / scale


def residuals(dp: DeformationParameter, triple: TripleParams, table: KernelTable, equations=EQUATIONS) -> ResidualReport:
    """Evaluate each equation at every point whose full stencil is in the table."""
    out = []
    if not triple.parity_compatible:
        # no weight-zero triples: the E/F stencils do not exist on this lattice
        for eq in equations:
            mags = {p: abs(complex(v)) for p, v in table.values.items()}
            worst_pt = max(mags, key=mags.get, default=None)
            worst = mags[worst_pt] if worst_pt is not None else 0.0
            mean = sum(mags.values()) / len(mags) if mags else 0.0
            out.append(ResidualEntry(eq, worst, mean, 0.0, worst_pt, len(mags)))
        return ResidualReport(tuple(out))
    for eq in equations:
        worst_val, worst_pt, total, count, norm = 0.0, None, 0.0, 0, 0.0
        for point in table.points():
            r = point_residual(dp, triple, eq, point, table.values)
            if r is None:
                continue
            count += 1
            total += r
            if r > worst_val or worst_pt is None:
                worst_val, worst_pt = r, point
        for point in table.points():
            row = equation_row(dp, triple, eq, point)
            if row:
                norm = max(norm, max(abs(complex(c)) for c in row.values()))
        out.append(ResidualEntry(eq, worst_val, total / count if count else 0.0, norm, worst_pt, count))
    return ResidualReport(tuple(out))
