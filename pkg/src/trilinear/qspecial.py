"""Complex q-arithmetic: powers of q, q-numbers, q-Pochhammer symbols, q-Gamma and phi.

All functions take a :class:`DeformationParameter`, which fixes ``q`` together with a
branch of ``log q``.  Powers are always ``q**s = exp(s * log_q)``.

Setting ``dps`` on the parameter switches every routine to mpmath at that many
decimal digits; otherwise plain double-precision ``complex`` is used.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath

from trilinear.errors import ClassicalModeError, DomainError, PoleError

ROOT_OF_UNITY_CHECK = 64
ROOT_OF_UNITY_TOL = 1e-12
POLE_TOL = 1e-12


@dataclass(frozen=True)
class DeformationParameter:
    """The deformation parameter ``q`` with a fixed logarithm.

    ``classical=True`` is the ``q = 1`` limit: q-numbers are replaced by ordinary
    numbers and every power of ``q`` by 1.
    """

    q: complex = 1.0
    log_q: complex | None = None
    classical: bool = False
    dps: int | None = None

    def __post_init__(self):
        if self.classical:
            object.__setattr__(self, "q", 1.0 + 0j)
            object.__setattr__(self, "log_q", 0j)
            return
        q = complex(self.q)
        if q == 0:
            raise DomainError("q must be nonzero")
        object.__setattr__(self, "q", q)
        if self.log_q is None:
            object.__setattr__(self, "log_q", cmath.log(q))
        else:
            log_q = complex(self.log_q)
            if abs(cmath.exp(log_q) - q) > 1e-12 * max(1.0, abs(q)):
                raise DomainError(f"exp(log_q) = {cmath.exp(log_q)} does not match q = {q}")
            object.__setattr__(self, "log_q", log_q)
        for k in range(1, ROOT_OF_UNITY_CHECK + 1):
            if abs(cmath.exp(k * self.log_q) - 1) <= ROOT_OF_UNITY_TOL:
                raise DomainError(f"q is (numerically) a root of unity: |q^{k} - 1| <= {ROOT_OF_UNITY_TOL}")

    @classmethod
    def quantum(cls, q, log_q=None, dps=None) -> "DeformationParameter":
        return cls(q=q, log_q=log_q, classical=False, dps=dps)

    @classmethod
    def classical_limit(cls) -> "DeformationParameter":
        return cls(classical=True)

    @property
    def quantum_mode(self) -> bool:
        return not self.classical

    def squared(self) -> "DeformationParameter":
        """The parameter ``q**2`` with logarithm ``2 log q`` (used by phi)."""
        if self.classical:
            return self
        return DeformationParameter(q=cmath.exp(2 * self.log_q), log_q=2 * self.log_q, dps=self.dps)

    # numeric backend -----------------------------------------------------------

    def num(self, x):
        """Coerce ``x`` to the working number type."""
        if self.dps is None:
            return complex(x)
        return mpmath.mpc(x)

    def exp(self, z):
        if self.dps is None:
            return cmath.exp(z)
        with mpmath.workdps(self.dps):
            return mpmath.exp(z)

    def log(self, z):
        if self.dps is None:
            return cmath.log(z)
        with mpmath.workdps(self.dps):
            return mpmath.log(z)

    def sinh(self, z):
        if self.dps is None:
            return cmath.sinh(z)
        with mpmath.workdps(self.dps):
            return mpmath.sinh(z)

    def _log_q(self):
        if self.dps is None:
            return self.log_q
        with mpmath.workdps(self.dps):
            # refine the double-precision branch choice at working precision
            lq = mpmath.log(mpmath.mpc(self.q))
            shift = round((complex(self.log_q).imag - float(lq.imag)) / (2 * math.pi))
            return lq + 2j * mpmath.pi * shift


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for infinite q-products."""

    term_cutoff: int = 10000
    tail_tolerance: float = 1e-17
    min_terms: int = 8

    def __post_init__(self):
        if self.term_cutoff < 1:
            raise ValueError("term_cutoff must be >= 1")
        if not self.tail_tolerance > 0:
            raise ValueError("tail_tolerance must be positive")


DEFAULT_TRUNCATION = TruncationPolicy()


def q_power(dp: DeformationParameter, s):
    """``q**s = exp(s log q)``; identically 1 in classical mode."""
    if dp.classical:
        return dp.num(1)
    if dp.dps is None:
        val = cmath.exp(complex(s) * dp.log_q)
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise OverflowError(f"q^{s} is not finite")
        return val
    with mpmath.workdps(dp.dps):
        return mpmath.exp(mpmath.mpc(s) * dp._log_q())


def q_number(dp: DeformationParameter, x):
    """The q-number ``[x]_q = (q^x - q^-x) / (q - q^-1)``.

    Evaluated as ``sinh(x log q) / sinh(log q)``, which avoids the cancellation of
    the textbook form as ``q -> 1``.
    """
    if dp.classical:
        raise ClassicalModeError("q_number is undefined at q = 1; use the classical coefficient path")
    if dp.dps is None:
        return cmath.sinh(complex(x) * dp.log_q) / cmath.sinh(dp.log_q)
    with mpmath.workdps(dp.dps):
        lq = dp._log_q()
        return mpmath.sinh(mpmath.mpc(x) * lq) / mpmath.sinh(lq)


def _check_inside_unit_disk(dp: DeformationParameter):
    if dp.classical or not abs(dp.q) < 1:
        raise DomainError(f"infinite q-products need |q| < 1, got q = {dp.q}")


def _pochhammer(dp, a, tp, pole_check=False):
    _check_inside_unit_disk(dp)
    q = dp.num(dp.q)
    with mpmath.workdps(dp.dps or 15):
        prod = dp.num(1)
        term = dp.num(a)
        for n in range(tp.term_cutoff):
            factor = 1 - term
            if pole_check and abs(factor) < POLE_TOL:
                raise PoleError(f"factor (1 - a q^{n}) vanishes", index=n)
            prod *= factor
            if n + 1 >= tp.min_terms and abs(term) < tp.tail_tolerance:
                break
            term *= q
    return prod


def q_pochhammer_inf(dp: DeformationParameter, a, tp: TruncationPolicy = DEFAULT_TRUNCATION):
    """``(a; q)_inf = prod_{n >= 0} (1 - a q^n)`` for ``|q| < 1``, truncated per ``tp``."""
    return _pochhammer(dp, a, tp)


def pochhammer_tail_bound(dp: DeformationParameter, a, n_terms: int) -> float:
    """Bound on ``sum_{n >= N} |a q^n| = |a| |q|^N / (1 - |q|)``, which controls the
    relative error of truncating the product after ``N`` factors."""
    aq = abs(complex(dp.q))
    return abs(complex(a)) * aq**n_terms / (1 - aq)


def q_gamma(dp: DeformationParameter, x, tp: TruncationPolicy = DEFAULT_TRUNCATION):
    """``Gamma_q(x) = (1-q)^(1-x) (q;q)_inf / (q^x;q)_inf`` for ``|q| < 1``.

    Raises :class:`PoleError` when ``q^x`` sits on the pole set ``q^-k``.
    """
    _check_inside_unit_disk(dp)
    q = dp.num(dp.q)
    x = dp.num(x)
    num = _pochhammer(dp, q, tp)
    den = _pochhammer(dp, q_power(dp, x), tp, pole_check=True)
    with mpmath.workdps(dp.dps or 15):
        prefactor = dp.exp((1 - x) * dp.log(1 - q))
        return prefactor * num / den


def phi(dp: DeformationParameter, x, tp: TruncationPolicy = DEFAULT_TRUNCATION):
    """``phi(x) = q^(-(x^2 - 3x)/2) Gamma_{q^2}(x)``, a solution of ``phi(x+1) = [x]_q phi(x)``."""
    x = dp.num(x)
    with mpmath.workdps(dp.dps or 15):
        return q_power(dp, -(x * x - 3 * x) / 2) * q_gamma(dp.squared(), x, tp)


def phi_ratio(dp: DeformationParameter, x, y, tp: TruncationPolicy = DEFAULT_TRUNCATION):
    """``phi(x) / phi(y)`` with the q-power prefactors combined before exponentiation."""
    x = dp.num(x)
    y = dp.num(y)
    dq = dp.squared()
    q2 = dq.num(dq.q)
    with mpmath.workdps(dp.dps or 15):
        expo = -((x * x - 3 * x) - (y * y - 3 * y)) / 2
        pref = q_power(dp, expo) * dp.exp((y - x) * dp.log(1 - q2))
        num = _pochhammer(dq, q_power(dq, y), tp, pole_check=True)
        den = _pochhammer(dq, q_power(dq, x), tp, pole_check=True)
        return pref * num / den
