import cmath

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from trilinear.errors import ClassicalModeError, DomainError, PoleError
from trilinear.qspecial import (
    DeformationParameter,
    TruncationPolicy,
    phi,
    phi_ratio,
    pochhammer_tail_bound,
    q_gamma,
    q_number,
    q_pochhammer_inf,
    q_power,
)

from conftest import complexes, finite, q_inside

DP = DeformationParameter


class TestDeformationParameter:
    def test_rejects_zero(self):
        with pytest.raises(DomainError):
            DP.quantum(0)

    @pytest.mark.parametrize("q", [-1, 1j, cmath.exp(2j * cmath.pi / 7)])
    def test_rejects_roots_of_unity(self, q):
        with pytest.raises(DomainError):
            DP.quantum(q)

    def test_explicit_branch(self):
        dp = DP.quantum(0.5, log_q=cmath.log(0.5) + 2j * cmath.pi)
        assert abs(q_power(dp, 0.5) + 0.5**0.5) < 1e-15  # other sheet flips the sign

    def test_branch_must_match_q(self):
        with pytest.raises(DomainError):
            DP.quantum(0.5, log_q=0.1)

    def test_classical_mode(self):
        dp = DP.classical_limit()
        assert dp.q == 1 and q_power(dp, 3.7 + 2j) == 1


class TestQPower:
    def test_zero_exponent(self):
        assert q_power(DP.quantum(0.37 + 0.2j), 0) == 1

    def test_identity_exponent(self):
        assert q_power(DP.quantum(0.5), 1) == pytest.approx(0.5, rel=1e-15)

    def test_square(self):
        with mpmath.workdps(40):
            expected = complex(mpmath.exp(2 * mpmath.log(mpmath.mpf("0.5"))))
        assert abs(q_power(DP.quantum(0.5), 2 + 0j) - expected) < 1e-16

    @given(q=q_inside(), s1=complexes(5), s2=complexes(5))
    def test_multiplicative(self, q, s1, s2):
        dp = DP.quantum(q)
        lhs = q_power(dp, s1 + s2)
        rhs = q_power(dp, s1) * q_power(dp, s2)
        assert abs(lhs - rhs) <= 1e-12 * max(1, abs(lhs))


class TestQNumber:
    def test_zero(self):
        assert q_number(DP.quantum(0.5), 0) == 0

    def test_one(self):
        assert q_number(DP.quantum(0.3 + 0.1j), 1) == pytest.approx(1, rel=1e-15)

    def test_q2_x2(self):
        # (4 - 1/4) / (2 - 1/2)
        assert q_number(DP.quantum(2), 2) == pytest.approx(2.5, rel=1e-15)

    def test_classical_mode_refused(self):
        with pytest.raises(ClassicalModeError):
            q_number(DP.classical_limit(), 1.5)

    @given(q=q_inside(), x=complexes(10).filter(lambda z: abs(z) <= 10))
    def test_odd(self, q, x):
        dp = DP.quantum(q)
        assert abs(q_number(dp, -x) + q_number(dp, x)) < 1e-12 * max(1, abs(q_number(dp, x)))

    @pytest.mark.parametrize("x", [-5.0, -2.5, -0.3, 0.7, 3.0, 5.0])
    def test_classical_limit_linear_rate(self, x):
        errs = [abs(q_number(DP.quantum(1 - 10.0**-j), x) - x) for j in range(2, 7)]
        for j, err in zip(range(2, 7), errs):
            assert err <= 10 * abs(x) ** 3 * 10.0**-j + 1e-12
        assert all(b < a for a, b in zip(errs, errs[1:])) or errs[0] < 1e-12

    def test_textbook_form(self):
        dp = DP.quantum(0.7 + 0.2j)
        x = 1.3 - 0.4j
        q = dp.q
        direct = (q_power(dp, x) - q_power(dp, -x)) / (q - 1 / q)
        assert abs(q_number(dp, x) - direct) < 1e-13


class TestPochhammer:
    def test_zero_argument(self):
        assert q_pochhammer_inf(DP.quantum(0.5), 0) == 1

    def test_half_half(self):
        expected = complex(mpmath.qp(0.5, 0.5))
        assert abs(q_pochhammer_inf(DP.quantum(0.5), 0.5) - expected) < 1e-15

    def test_first_factor_vanishes(self):
        assert q_pochhammer_inf(DP.quantum(0.5), 1) == 0

    @pytest.mark.parametrize("q", [1.2, 1.0 + 0.0j, -1.5])
    def test_domain(self, q):
        dp = DP.quantum(q) if q != 1 else DP.classical_limit()
        with pytest.raises(DomainError):
            q_pochhammer_inf(dp, 0.3)

    def test_tail_bound_controls_truncation(self):
        dp = DP.quantum(0.9)
        full = complex(mpmath.qp(0.7, 0.9))
        n_terms = 60
        cut = q_pochhammer_inf(dp, 0.7, TruncationPolicy(term_cutoff=n_terms, tail_tolerance=1e-300))
        bound = pochhammer_tail_bound(dp, 0.7, n_terms)
        # |log prod_{n>=N}(1 - a q^n)| <= sum |a q^n| (1 + O(|a q^N|))
        assert abs(cut / full - 1) <= 1.1 * bound

    @given(q=q_inside(), a=complexes(2))
    def test_matches_mpmath(self, q, a):
        expected = complex(mpmath.qp(a, q))
        got = q_pochhammer_inf(DP.quantum(q), a)
        assert abs(got - expected) <= 1e-12 * max(1, abs(expected))


class TestQGamma:
    def test_one(self):
        assert q_gamma(DP.quantum(0.5), 1) == pytest.approx(1, rel=1e-14)

    def test_two(self):
        assert q_gamma(DP.quantum(0.5), 2) == pytest.approx(1, rel=1e-14)

    def test_three(self):
        assert q_gamma(DP.quantum(0.5), 3) == pytest.approx(1.5, rel=1e-14)

    def test_matches_mpmath(self):
        for q, x in [(0.5, 2.7), (0.8, -1.3 + 0.4j), (0.35, 0.2 - 1j)]:
            assert abs(q_gamma(DP.quantum(q), x) / complex(mpmath.qgamma(x, q)) - 1) < 1e-12

    @pytest.mark.parametrize("k", [0, 1, 4])
    def test_pole(self, k):
        with pytest.raises(PoleError) as info:
            q_gamma(DP.quantum(0.5), -k)
        assert info.value.index == k

    @given(q=q_inside(), x=complexes(4))
    def test_recurrence(self, q, x):
        assume(min(abs(x + k) for k in range(0, 30)) > 0.1)
        dp = DP.quantum(q)
        g0, g1 = q_gamma(dp, x), q_gamma(dp, x + 1)
        rhs = (q_power(dp, x) - 1) / (q - 1) * g0
        assert abs(g1 - rhs) <= 1e-10 * max(abs(g1), abs(rhs))


class TestPhi:
    def test_one(self):
        for q in (0.5, 0.7 + 0.1j):
            assert abs(phi(DP.quantum(q), 1) - q) < 1e-14

    def test_two(self):
        assert abs(phi(DP.quantum(0.5), 2) - 0.5) < 1e-14

    def test_functional_equation_sample(self):
        dp = DP.quantum(0.5)
        lhs = phi(dp, 2.5 + 1j)
        rhs = phi(dp, 1.5 + 1j) * q_number(dp, 1.5 + 1j)
        assert abs(lhs - rhs) < 1e-10 * abs(lhs)

    @given(q=q_inside(), x=complexes(4))
    def test_functional_equation(self, q, x):
        assume(min(abs(x + k) for k in range(0, 30)) > 0.1)
        dp = DP.quantum(q)
        lhs, rhs = phi(dp, x + 1), q_number(dp, x) * phi(dp, x)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), abs(rhs))

    def test_ratio_matches_quotient(self):
        dp = DP.quantum(0.6 - 0.1j)
        x, y = 1.2 + 0.3j, -0.7 + 0.1j
        assert abs(phi_ratio(dp, x, y) - phi(dp, x) / phi(dp, y)) < 1e-12 * abs(phi_ratio(dp, x, y))


class TestHighPrecision:
    def test_q_number_agrees(self):
        lo, hi = DP.quantum(0.999999), DP.quantum(0.999999, dps=40)
        assert abs(q_number(lo, 2.3) - complex(q_number(hi, 2.3))) < 1e-12

    def test_gamma_recurrence_tight(self):
        dp = DP.quantum(0.5, dps=40)
        x = mpmath.mpc(0.3, 0.2)
        with mpmath.workdps(40):
            lhs = q_gamma(dp, x + 1)
            rhs = (q_power(dp, x) - 1) / (mpmath.mpf(0.5) - 1) * q_gamma(dp, x)
            assert abs(lhs - rhs) < mpmath.mpf(10) ** -35
