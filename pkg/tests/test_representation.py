import json

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trilinear.errors import DegenerateParameterError, DomainError, InvalidWeightError
from trilinear.qspecial import DeformationParameter, phi, q_number, q_power
from trilinear.representation import (
    ModuleParams,
    TripleParams,
    commutator_check_module,
    e_coeff,
    f_coeff,
    intertwining_residuals,
    reflection_build,
    triple_e_coeffs,
    triple_f_coeffs,
    unitarity_residual,
)
from trilinear.sweeps import draw_q, draw_s

from conftest import complexes, finite, q_inside

DP = DeformationParameter
CL = DP.classical_limit()


def qnum_direct(q, x):
    """[x]_q straight from the defining quotient, in mpmath."""
    q = mpmath.mpc(q)
    lq = mpmath.log(q)
    return complex((mpmath.exp(x * lq) - mpmath.exp(-x * lq)) / (q - 1 / q))


class TestModuleParams:
    def test_bad_epsilon(self):
        with pytest.raises(ValueError):
            ModuleParams(1.0, 2)

    @pytest.mark.parametrize("s,eps,ok", [(1, 0, False), (-3, 0, False), (2, 1, False), (1, 1, True), (0.5, 0, True), (1 + 1e-3j, 0, True)])
    def test_irreducible(self, s, eps, ok):
        assert ModuleParams(s, eps).irreducible() is ok

    def test_far_from_axis(self):
        assert ModuleParams(1 + 5j, 0).irreducible()

    def test_triple_parity(self):
        assert TripleParams.from_values((1, 1, 1), (1, 1, 0)).parity_compatible
        assert not TripleParams.from_values((1, 1, 1), (0, 0, 1)).parity_compatible

    def test_triple_needs_three(self):
        with pytest.raises(ValueError):
            TripleParams((ModuleParams(1), ModuleParams(1)))


class TestCoefficients:
    def test_classical_e(self):
        assert e_coeff(CL, ModuleParams(3, 0), 0) == 2

    def test_classical_f(self):
        assert f_coeff(CL, ModuleParams(3, 0), 0) == 2

    def test_quantum_e_vanishes(self):
        assert e_coeff(DP.quantum(0.5), ModuleParams(-1, 0), 0) == 0

    def test_quantum_f_vanishes(self):
        assert f_coeff(DP.quantum(0.5), ModuleParams(1, 0), 2) == 0

    def test_quantum_e_value(self):
        got = e_coeff(DP.quantum(0.5), ModuleParams(2, 0), 0)
        assert abs(got - qnum_direct(0.5, 1.5)) < 1e-14

    def test_quantum_f_value(self):
        got = f_coeff(DP.quantum(0.5), ModuleParams(2, 0), 2)
        assert abs(got - qnum_direct(0.5, 0.5)) < 1e-14

    def test_wrong_parity(self):
        with pytest.raises(InvalidWeightError):
            e_coeff(CL, ModuleParams(0.3, 1), 2)

    def test_commutator_sample(self):
        assert commutator_check_module(DP.quantum(0.7), ModuleParams(2.3 + 1j, 0), 4) < 1e-12

    @given(s=complexes(4), k=st.integers(-20, 20), eps=st.integers(0, 1))
    def test_commutator_classical(self, s, k, eps):
        n = 2 * k + eps
        assert commutator_check_module(CL, ModuleParams(s, eps), n) < 1e-12

    @given(q=q_inside(), s=complexes(4), k=st.integers(-10, 10), eps=st.integers(0, 1))
    def test_commutator_quantum(self, q, s, k, eps):
        dp = DP.quantum(q)
        mp = ModuleParams(s, eps)
        n = 2 * k + eps
        scale = max(1.0, abs(e_coeff(dp, mp, n - 2) * f_coeff(dp, mp, n)), abs(q_number(dp, n)))
        assert commutator_check_module(dp, mp, n) < 1e-12 * scale


def coproduct_expand(q, coeffs_e, weights):
    """E acting on a triple tensor: (E x 1 + K x E) twice, as matrices on three slots.

    Each slot is a 1D weight space; we track the K-eigenvalues explicitly instead of
    reusing the package's factor bookkeeping.
    """
    n, m, k = weights
    K = [q**n, q**m, q**k]
    # (Delta x id) Delta(E) = E x 1 x 1 + K x E x 1 + K x K x E
    return (coeffs_e[0], K[0] * coeffs_e[1], K[0] * K[1] * coeffs_e[2])


def coproduct_expand_f(q, coeffs_f, weights):
    # Delta(F) = F x K^-1 + 1 x F  =>  F x K^-1 x K^-1 + 1 x F x K^-1 + 1 x 1 x F
    n, m, k = weights
    Kinv = [q**-n, q**-m, q**-k]
    return (coeffs_f[0] * Kinv[1] * Kinv[2], coeffs_f[1] * Kinv[2], coeffs_f[2])


class TestTripleAction:
    T111 = TripleParams.from_values((1, 1, 1), (0, 0, 0))

    def test_classical_no_q_factors(self):
        tp = TripleParams.from_values((0.3, 1.1, -0.4), (0, 0, 0))
        w = (2, -4, 2)
        assert triple_e_coeffs(CL, tp, w) == tuple(e_coeff(CL, mp, x) for mp, x in zip(tp.modules, w))
        assert triple_f_coeffs(CL, tp, w) == tuple(f_coeff(CL, mp, x) for mp, x in zip(tp.modules, w))

    def test_e_third_vanishes(self):
        assert triple_e_coeffs(DP.quantum(0.5), self.T111, (0, 0, -2))[2] == 0

    def test_f_first_factor(self):
        dp = DP.quantum(0.5)
        c1 = triple_f_coeffs(dp, self.T111, (2, 0, -2))[0]
        assert abs(c1 - 0.25 * f_coeff(dp, self.T111.modules[0], 2)) < 1e-15

    def test_f_third_vanishes(self):
        # (s3 - k + 1)/2 = 0 at k = 2
        assert triple_f_coeffs(DP.quantum(0.5), self.T111, (0, -2, 2))[2] == 0

    @given(q=st.sampled_from([0.5, 0.8 + 0.1j, 0.35 - 0.2j]), n=st.integers(-4, 4), m=st.integers(-4, 4))
    def test_matches_coproduct(self, q, n, m):
        dp = DP.quantum(q)
        tp = TripleParams.from_values((2.1, 1.3 + 0.5j, 0.7), (0, 0, 0))
        w = (2 * n, 2 * m, -2 * n - 2 * m + 2)
        e_single = [e_coeff(dp, mp, x) for mp, x in zip(tp.modules, w)]
        f_single = [f_coeff(dp, mp, x) for mp, x in zip(tp.modules, w)]
        np.testing.assert_allclose(triple_e_coeffs(dp, tp, w), coproduct_expand(q, e_single, w), rtol=1e-12)
        np.testing.assert_allclose(triple_f_coeffs(dp, tp, w), coproduct_expand_f(q, f_single, w), rtol=1e-12)

    def test_coproduct_is_homomorphism(self):
        """[E, F] = [H]_q on a triple tensor, built from the triple coefficients."""
        dp = DP.quantum(0.6 + 0.1j)
        tp = TripleParams.from_values((0.4, 1.7 - 0.3j, -0.9), (0, 1, 1))
        w = (2, -3, 5)

        def apply(fn, vec):
            out = {}
            for (a, b, c), val in vec.items():
                cs = fn(dp, tp, (a, b, c))
                step = 2 if fn is triple_e_coeffs else -2
                for i, ci in enumerate(cs):
                    t = [a, b, c]
                    t[i] += step
                    out[tuple(t)] = out.get(tuple(t), 0) + ci * val
            return out

        v = {w: 1.0}
        ef = apply(triple_e_coeffs, apply(triple_f_coeffs, v))
        fe = apply(triple_f_coeffs, apply(triple_e_coeffs, v))
        total = sum(w)
        for key in set(ef) | set(fe):
            diff = ef.get(key, 0) - fe.get(key, 0)
            expected = q_number(dp, total) if key == w else 0
            assert abs(diff - expected) < 1e-12 * max(1, abs(expected))


class TestReflection:
    def test_s_zero_constant(self):
        for dp in (CL, DP.quantum(0.5)):
            rm = reflection_build(dp, ModuleParams(0, 0), 20)
            assert all(abs(v - 1) < 1e-14 for v in rm.normalized().values())

    def test_anchor(self):
        rm = reflection_build(CL, ModuleParams(0.4, 1), 9)
        assert rm.anchor == 1 and rm[1] == 1
        assert rm.weights == list(range(-9, 10, 2))

    def test_phi_table(self):
        dp = DP.quantum(0.5)
        rm = reflection_build(dp, ModuleParams(0.4, 0), 10, method="phi")
        for n in range(-10, 11, 2):
            direct = phi(dp, (-0.4 + n + 1) / 2) / phi(dp, (0.4 + n + 1) / 2)
            assert abs(rm[n] - direct) < 1e-10 * abs(direct)

    def test_phi_needs_inside_disc(self):
        with pytest.raises(DomainError):
            reflection_build(DP.quantum(1.5), ModuleParams(0.4, 0), 10, method="phi")

    def test_auto_outside_disc_uses_recurrence(self):
        rm = reflection_build(DP.quantum(1.5), ModuleParams(0.4, 0), 10)
        assert rm.method == "recurrence" and rm.recurrence_residual() < 1e-10

    def test_reducible_breakdown(self):
        with pytest.raises(DegenerateParameterError) as info:
            reflection_build(CL, ModuleParams(-3, 0), 10)
        assert info.value.location is not None

    def test_classical_gamma_ratio(self):
        # the recurrence solution is Gamma((-s+n+1)/2) / Gamma((s+n+1)/2) up to scale
        s = 0.37 + 0.2j
        rm = reflection_build(CL, ModuleParams(s, 0), 12)
        g = {n: complex(mpmath.gamma((-s + n + 1) / 2) / mpmath.gamma((s + n + 1) / 2)) for n in rm.weights}
        for n in rm.weights:
            assert abs(rm[n] - g[n] / g[0]) < 1e-12 * abs(g[n] / g[0])

    def test_json(self):
        rm = reflection_build(DP.quantum(0.5), ModuleParams(0.4 + 0.1j, 1), 5)
        d = json.loads(rm.to_json())
        assert d["format"] == 1 and d["epsilon"] == 1
        assert [e["n"] for e in d["entries"]] == [-5, -3, -1, 1, 3, 5]
        assert set(d) >= {"s", "epsilon", "q", "anchor", "entries"}

    def test_unitarity_sample(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            dp = DP.quantum(draw_q(rng))
            mp = ModuleParams(draw_s(rng, 0), 0)
            for method in ("phi", "recurrence"):
                fwd = reflection_build(dp, mp, 40, method=method)
                bwd = reflection_build(dp, mp.negated(), 40, method=method)
                assert unitarity_residual(fwd, bwd) < 1e-10

    @given(q=q_inside(), s=complexes(3), eps=st.integers(0, 1))
    def test_intertwining(self, q, s, eps):
        mp = ModuleParams(s, eps)
        if mp.distance_to_excluded() < 0.1 or mp.negated().distance_to_excluded() < 0.1:
            return
        rm = reflection_build(DP.quantum(q), mp, 20, method="recurrence")
        e_res, f_res = intertwining_residuals(rm)
        assert e_res < 1e-10 and f_res < 1e-10

    @given(s=complexes(3), eps=st.integers(0, 1), q=st.one_of(st.just(None), q_inside()))
    def test_e_and_f_recurrences_agree(self, s, eps, q):
        mp = ModuleParams(s, eps)
        if mp.distance_to_excluded() < 0.1 or mp.negated().distance_to_excluded() < 0.1:
            return
        dp = CL if q is None else DP.quantum(q)
        a = reflection_build(dp, mp, 20, method="recurrence").normalized()
        b = reflection_build(dp, mp, 20, method="recurrence_f").normalized()
        assert max(abs(a[n] - b[n]) / abs(a[n]) for n in a) < 1e-10

    def test_uniqueness_on_window(self):
        """A diagonal map intertwining E on a window is fixed by its anchor value."""
        dp = DP.quantum(0.6)
        mp = ModuleParams(0.3 + 0.4j, 0)
        neg = mp.negated()
        ws = list(range(-10, 11, 2))
        rows = []
        for i, n in enumerate(ws[:-1]):
            row = np.zeros(len(ws), complex)
            row[i + 1] = e_coeff(dp, mp, n)
            row[i] = -e_coeff(dp, neg, n)
            rows.append(row)
        sv = np.linalg.svd(np.array(rows), compute_uv=False)
        assert len(ws) - np.sum(sv > 1e-10 * sv[0]) == 1
