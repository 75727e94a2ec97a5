"""Principal-series modules M(s, eps) and M_q(s, eps).

Basis vectors ``v_n`` exist for ``n = eps (mod 2)``.  In classical mode

    E v_n = (s + n + 1)/2 v_{n+2},   F v_n = (s - n + 1)/2 v_{n-2},   H v_n = n v_n

and in quantum mode the coefficients become q-numbers of the same arguments, with
``K v_n = q^n v_n``.  Also here: the coproduct action on triple tensors and the
diagonal reflection intertwiners ``M(s, eps) -> M(-s, eps)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from trilinear.errors import DegenerateParameterError, DomainError, InvalidWeightError
from trilinear.qspecial import (
    DEFAULT_TRUNCATION,
    DeformationParameter,
    TruncationPolicy,
    phi_ratio,
    q_number,
    q_power,
)

IRREDUCIBILITY_K = 64
IRREDUCIBILITY_TOL = 1e-10
DIVISOR_TOL = 1e-12


@dataclass(frozen=True)
class ModuleParams:
    s: complex
    epsilon: int = 0

    def __post_init__(self):
        if self.epsilon not in (0, 1):
            raise ValueError(f"epsilon must be 0 or 1, got {self.epsilon}")
        object.__setattr__(self, "s", complex(self.s))

    def distance_to_excluded(self) -> float:
        """Distance from ``s - eps`` to the nearest odd integer of modulus <= 64."""
        z = self.s - self.epsilon
        k = 2 * math.floor(z.real / 2) + 1
        candidates = [c for c in (k - 2, k, k + 2) if abs(c) <= IRREDUCIBILITY_K]
        if not candidates:
            return math.inf
        return min(abs(z - c) for c in candidates)

    def irreducible(self) -> bool:
        """True unless ``s - eps`` lies in ``2Z + 1`` (up to 1e-10)."""
        return self.distance_to_excluded() > IRREDUCIBILITY_TOL

    def check_weight(self, n: int) -> None:
        if (n - self.epsilon) % 2:
            raise InvalidWeightError(f"weight {n} has the wrong parity for epsilon = {self.epsilon}")

    def negated(self) -> "ModuleParams":
        return ModuleParams(-self.s, self.epsilon)


@dataclass(frozen=True)
class TripleParams:
    """Three modules; the kernel lives on weight-zero triples ``v_n (x) v_m (x) v_{-n-m}``."""

    modules: tuple[ModuleParams, ModuleParams, ModuleParams]

    def __post_init__(self):
        mods = tuple(self.modules)
        if len(mods) != 3:
            raise ValueError("a triple needs exactly three modules")
        object.__setattr__(self, "modules", mods)

    @classmethod
    def from_values(cls, s, eps) -> "TripleParams":
        return cls(tuple(ModuleParams(si, ei) for si, ei in zip(s, eps)))

    @property
    def s(self) -> tuple[complex, complex, complex]:
        return tuple(mp.s for mp in self.modules)

    @property
    def eps(self) -> tuple[int, int, int]:
        return tuple(mp.epsilon for mp in self.modules)

    @property
    def parity_compatible(self) -> bool:
        e1, e2, e3 = self.eps
        return (e1 + e2 - e3) % 2 == 0

    def irreducible(self) -> bool:
        return all(mp.irreducible() for mp in self.modules)


# single-module coefficients ----------------------------------------------------


def _bracket(dp: DeformationParameter, x):
    """``x`` in classical mode, ``[x]_q`` otherwise."""
    if dp.classical:
        return dp.num(x)
    return q_number(dp, x)


def e_coeff(dp: DeformationParameter, mp: ModuleParams, n: int):
    mp.check_weight(n)
    return _bracket(dp, (mp.s + n + 1) / 2)


def f_coeff(dp: DeformationParameter, mp: ModuleParams, n: int):
    mp.check_weight(n)
    return _bracket(dp, (mp.s - n + 1) / 2)


def k_eigenvalue(dp: DeformationParameter, n: int):
    return q_power(dp, n)


def commutator_check_module(dp: DeformationParameter, mp: ModuleParams, n: int) -> float:
    """``|(EF - FE) v_n - [n]_q v_n|``, i.e. the defining relation on one basis vector."""
    ef = e_coeff(dp, mp, n - 2) * f_coeff(dp, mp, n)
    fe = f_coeff(dp, mp, n + 2) * e_coeff(dp, mp, n)
    return abs(complex(ef - fe - _bracket(dp, n)))


# triple tensor action ----------------------------------------------------------


def _check_triple_weights(triple: TripleParams, weights):
    for mp, w in zip(triple.modules, weights):
        mp.check_weight(w)


def triple_e_coeffs(dp: DeformationParameter, triple: TripleParams, weights):
    """Coefficients of ``E(v_n (x) v_m (x) v_k)`` on the three raised basis tensors.

    ``Delta(E) = E (x) 1 + K (x) E`` applied twice gives K-factors ``1, q^n, q^(n+m)``.
    """
    n, m, k = weights
    _check_triple_weights(triple, weights)
    m1, m2, m3 = triple.modules
    return (
        e_coeff(dp, m1, n),
        q_power(dp, n) * e_coeff(dp, m2, m),
        q_power(dp, n + m) * e_coeff(dp, m3, k),
    )


def triple_f_coeffs(dp: DeformationParameter, triple: TripleParams, weights):
    """Coefficients of ``F(v_n (x) v_m (x) v_k)``; K-factors ``q^(-m-k), q^(-k), 1``."""
    n, m, k = weights
    _check_triple_weights(triple, weights)
    m1, m2, m3 = triple.modules
    return (
        q_power(dp, -m - k) * f_coeff(dp, m1, n),
        q_power(dp, -k) * f_coeff(dp, m2, m),
        f_coeff(dp, m3, k),
    )


# reflection operators ----------------------------------------------------------


@dataclass(frozen=True)
class ReflectionMap:
    """Diagonal intertwiner ``v_n -> r_n v_n`` from ``M(s, eps)`` to ``M(-s, eps)``."""

    source: ModuleParams
    dp: DeformationParameter
    coefficients: dict
    anchor: int
    anchor_value: complex
    method: str

    def __getitem__(self, n):
        return self.coefficients[n]

    @property
    def weights(self):
        return sorted(self.coefficients)

    def normalized(self) -> dict:
        """Coefficients rescaled so that the anchor entry equals 1."""
        a = self.coefficients[self.anchor]
        return {n: v / a for n, v in self.coefficients.items()}

    def recurrence_residual(self) -> float:
        """Max relative residual of ``[(s+n+1)/2] r_{n+2} = [(-s+n+1)/2] r_n``."""
        worst = 0.0
        s = self.source.s
        for n in self.weights:
            if n + 2 not in self.coefficients:
                continue
            lhs = _bracket(self.dp, (s + n + 1) / 2) * self.coefficients[n + 2]
            rhs = _bracket(self.dp, (-s + n + 1) / 2) * self.coefficients[n]
            scale = max(abs(complex(lhs)), abs(complex(rhs)))
            if scale:
                worst = max(worst, abs(complex(lhs - rhs)) / scale)
        return worst

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "s": {"re": self.source.s.real, "im": self.source.s.imag},
            "epsilon": self.source.epsilon,
            "q": {"re": self.dp.q.real, "im": self.dp.q.imag},
            "classical": self.dp.classical,
            "method": self.method,
            "anchor": {"n": self.anchor, "re": complex(self.anchor_value).real, "im": complex(self.anchor_value).imag},
            "entries": [
                {"n": n, "re": complex(v).real, "im": complex(v).imag} for n, v in sorted(self.coefficients.items())
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _weights_in_window(eps: int, window: int):
    start = -window if (window - eps) % 2 == 0 else -window + 1
    return list(range(start, window + 1, 2))


def _recurrence_table(dp, mp, window, use_f=False):
    s = mp.s
    anchor = mp.epsilon
    table = {anchor: dp.num(1)}

    def ratio(num, den, n):
        if abs(complex(den)) < DIVISOR_TOL:
            raise DegenerateParameterError("reflection recurrence divides by ~0 (reducible parameter)", location=n)
        return num / den

    n = anchor
    while n + 2 <= window:
        if use_f:
            # [(s-n-1)/2] r_n = [(-s-n-1)/2] r_{n+2}
            table[n + 2] = table[n] * ratio(_bracket(dp, (s - n - 1) / 2), _bracket(dp, (-s - n - 1) / 2), n + 2)
        else:
            table[n + 2] = table[n] * ratio(_bracket(dp, (-s + n + 1) / 2), _bracket(dp, (s + n + 1) / 2), n)
        n += 2
    n = anchor
    while n - 2 >= -window:
        if use_f:
            # [(s-n+1)/2] r_{n-2} = [(-s-n+1)/2] r_n
            table[n - 2] = table[n] * ratio(_bracket(dp, (-s - n + 1) / 2), _bracket(dp, (s - n + 1) / 2), n - 2)
        else:
            # the E-recurrence read backwards from n-2
            table[n - 2] = table[n] * ratio(
                _bracket(dp, (s + n - 1) / 2), _bracket(dp, (-s + n - 1) / 2), n - 2
            )
        n -= 2
    return table


def reflection_build(
    dp: DeformationParameter,
    mp: ModuleParams,
    window: int,
    tp: TruncationPolicy = DEFAULT_TRUNCATION,
    method: str = "auto",
) -> ReflectionMap:
    """Coefficients of the reflection operator for ``|n| <= window``.

    ``method``:
      ``"phi"``          ratio ``phi((-s+n+1)/2) / phi((s+n+1)/2)`` (needs ``|q| < 1``)
      ``"recurrence"``   E-commutation recurrence from ``r_eps = 1``
      ``"recurrence_f"`` F-commutation recurrence from ``r_eps = 1``
      ``"auto"``         ``phi`` when available, otherwise ``recurrence``
    """
    if window < 0:
        raise ValueError("window must be nonnegative")
    if method == "auto":
        method = "phi" if dp.quantum_mode and abs(dp.q) < 1 else "recurrence"
    if method == "phi":
        if dp.classical or not abs(dp.q) < 1:
            raise DomainError("the phi-ratio construction needs quantum mode with |q| < 1")
        table = {}
        for n in _weights_in_window(mp.epsilon, window):
            try:
                table[n] = phi_ratio(dp, (-mp.s + n + 1) / 2, (mp.s + n + 1) / 2, tp)
            except DomainError as exc:
                raise DegenerateParameterError(f"phi-ratio singular: {exc}", location=n) from exc
    elif method in ("recurrence", "recurrence_f"):
        table = _recurrence_table(dp, mp, window, use_f=(method == "recurrence_f"))
    else:
        raise ValueError(f"unknown reflection method {method!r}")
    anchor = mp.epsilon
    return ReflectionMap(mp, dp, table, anchor, table[anchor], method)


def intertwining_residuals(rm: ReflectionMap) -> tuple[float, float]:
    """Relative residuals of ``R E = E' R`` and ``R F = F' R`` over the table."""
    dp, mp = rm.dp, rm.source
    neg = mp.negated()
    e_worst = f_worst = 0.0
    for n in rm.weights:
        if n + 2 in rm.coefficients:
            lhs = rm[n + 2] * e_coeff(dp, mp, n)
            rhs = e_coeff(dp, neg, n) * rm[n]
            scale = max(abs(complex(lhs)), abs(complex(rhs))) or 1.0
            e_worst = max(e_worst, abs(complex(lhs - rhs)) / scale)
        if n - 2 in rm.coefficients:
            lhs = rm[n - 2] * f_coeff(dp, mp, n)
            rhs = f_coeff(dp, neg, n) * rm[n]
            scale = max(abs(complex(lhs)), abs(complex(rhs))) or 1.0
            f_worst = max(f_worst, abs(complex(lhs - rhs)) / scale)
    return e_worst, f_worst


def unitarity_residual(forward: ReflectionMap, backward: ReflectionMap) -> float:
    """``max_n |r_n(s) r_n(-s) - 1|`` on the common weights."""
    common = set(forward.coefficients) & set(backward.coefficients)
    return max(abs(complex(forward[n] * backward[n]) - 1) for n in common)
