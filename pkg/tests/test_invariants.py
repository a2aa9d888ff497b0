import numpy as np
import pytest

from gemkit import (
    FourTerm,
    InputError,
    OracleConfig,
    PureState,
    StateType,
    acin_params_from_invariants,
    apply_local_unitaries,
    classify_from_invariants,
    classify_type,
    from_acin_params,
    ghz_state,
    invariants_from_acin,
    invariants_from_state,
    lambda0_candidates,
    lambda_sq_fourterm,
    newtype_invariants,
    newtype_standard_form,
    oracle_lambda_max,
    pmax_by_type,
    pmax_newtype_invariant_form,
    two_qubit_pmax,
)
from conftest import random_acin, random_simplex, random_state, random_unitary

CFG = OracleConfig(n_starts=16, seed=17)


class TestInvariantsFromAcin:
    def test_ghz(self):
        ji = invariants_from_acin(1 / np.sqrt(2), 0, 0, 0, 1 / np.sqrt(2), 0.0)
        assert np.allclose(ji.array(), [0, 0, 0, 0.25, 0], atol=1e-12)

    def test_product(self):
        ji = invariants_from_acin(1, 0, 0, 0, 0, 0.0)
        assert np.allclose(ji.array(), 0, atol=1e-15)

    def test_type3a_relation(self, rng):
        for _ in range(20):
            l0, l1, l2, l3, l4, phi = random_acin(rng, zeros=(1, 4))
            ji = invariants_from_acin(l0, l1, l2, l3, l4, phi)
            lhs = ji.j1 * ji.j2 + ji.j1 * ji.j3 + ji.j2 * ji.j3
            rhs = np.sqrt(ji.j1 * ji.j2 * ji.j3)
            assert abs(lhs - rhs) < 1e-10
            assert abs(rhs - ji.j5 / 2) < 1e-10


class TestInvariantsFromState:
    def test_ghz_via_bloch(self):
        ji = invariants_from_state(ghz_state(3))
        assert np.allclose(ji.array(), [0, 0, 0, 0.25, 0], atol=1e-10)
        assert ji.fit_residual < 1e-10

    def test_matches_direct_formulas(self, rng):
        for _ in range(20):
            params = random_acin(rng)
            direct = invariants_from_acin(*params)
            from_state = invariants_from_state(from_acin_params(*params))
            assert np.abs(direct.array() - from_state.array()).max() < 1e-9

    def test_lu_invariance(self, rng):
        params = random_acin(rng)
        psi = from_acin_params(*params)
        base = invariants_from_state(psi).array()
        for _ in range(10):
            rotated = apply_local_unitaries(psi, [random_unitary(rng) for _ in range(3)])
            assert np.abs(invariants_from_state(rotated).array() - base).max() < 1e-9

    def test_w_embedding(self):
        a = 1 / np.sqrt(3)
        ji = invariants_from_acin(a, 0, a, a, 0, 0.0)
        assert np.allclose([ji.j1, ji.j2, ji.j3], 1.0 / 9.0, atol=1e-12)
        amp = np.zeros(8)
        amp[0b100] = amp[0b010] = amp[0b001] = a
        jw = invariants_from_state(PureState.from_amplitudes(amp))
        assert np.allclose([jw.j1, jw.j2, jw.j3], 1.0 / 9.0, atol=1e-10)

    def test_rejects_wrong_size(self):
        with pytest.raises(InputError):
            invariants_from_state(ghz_state(4))


class TestLambda0Candidates:
    def test_ghz_double_root(self):
        cands = lambda0_candidates(invariants_from_acin(1 / np.sqrt(2), 0, 0, 0, 1 / np.sqrt(2), 0.0))
        assert not cands.degenerate
        assert len(cands.roots) == 1  # double root collapses to one value
        assert abs(cands.roots[0] - 0.5) < 1e-10

    def test_product_degenerate(self):
        cands = lambda0_candidates(invariants_from_acin(1, 0, 0, 0, 0, 0.0))
        assert cands.degenerate
        assert cands.roots == ()

    def test_generic_roots_reconstruct(self, rng):
        for _ in range(10):
            params = random_acin(rng, phi=float(rng.uniform(0.05, np.pi - 0.05)))
            ji = invariants_from_acin(*params)
            cands = lambda0_candidates(ji)
            assert 1 <= len(cands.roots) <= 2
            assert any(abs(r - params[0] ** 2) < 1e-8 for r in cands.roots)
            for root in cands.roots:
                rebuilt = acin_params_from_invariants(ji, root)
                back = invariants_from_acin(*rebuilt)
                assert np.abs(back.array() - ji.array()).max() < 1e-8


class TestClassifyType:
    def test_examples(self):
        s2 = 1 / np.sqrt(2)
        s3 = 1 / np.sqrt(3)
        assert classify_type(s2, 0, 0, 0, s2, 0.0) == StateType.TYPE2B
        assert classify_type(s3, 0, s3, s3, 0, 0.0) == StateType.TYPE3A
        s5 = 1 / np.sqrt(5)
        assert classify_type(s5, s5, s5, s5, s5, 0.3) == StateType.TYPE5
        assert classify_type(1, 0, 0, 0, 0, 0.0) == StateType.TYPE1
        assert classify_type(0, 1, 0, 0, 0, 0.0) == StateType.TYPE1
        assert classify_type(s2, 0, s2, 0, 0, 0.0) == StateType.TYPE2A_J2
        assert classify_type(s3, s3, 0, 0, s3, 0.0) == StateType.TYPE3B_23
        assert classify_type(0.5, 0.5, 0.5, 0.5, 0, 0.7) == StateType.TYPE4A

    def test_newtype_detected(self):
        form = newtype_standard_form(0.6, 0.5, 0.4, np.sqrt(1 - 0.77))
        assert classify_type(*form.lams, form.phi) == StateType.NEW_TYPE

    def test_from_invariants(self, rng):
        cases = {
            (): StateType.TYPE5,
            (1, 4): StateType.TYPE3A,
            (1, 2): StateType.TYPE3B_12,
            (1, 3): StateType.TYPE3B_13,
            (2, 3): StateType.TYPE3B_23,
            (1, 2, 3): StateType.TYPE2B,
            (3, 4): StateType.TYPE2A_J2,
        }
        for zeros, expected in cases.items():
            params = random_acin(rng, zeros=zeros, phi=0.9)
            ji = invariants_from_acin(*params)
            got = classify_from_invariants(ji)
            if expected == StateType.TYPE5:
                assert got in (StateType.TYPE5, StateType.TYPE4A)
            else:
                assert got == expected

    def test_type4a_from_invariants(self, rng):
        params = random_acin(rng, zeros=(4,))
        ji = invariants_from_acin(*params)
        assert classify_from_invariants(ji) == StateType.TYPE4A


class TestPmaxByType:
    def test_type1(self):
        assert pmax_by_type(StateType.TYPE1, invariants_from_acin(1, 0, 0, 0, 0, 0)) == 1.0

    def test_type2b_ghz(self):
        # Note: sqrt(1 - 4 j4) is ill-conditioned at j4 = 1/4, so rounding in
        # the coefficient representation shows up amplified to ~1e-8 here.
        ji = invariants_from_acin(np.sqrt(0.5), 0, 0, 0, np.sqrt(0.5), 0.0)
        assert abs(pmax_by_type(StateType.TYPE2B, ji) - 0.5) < 1e-12
        ji_alt = invariants_from_acin(1 / np.sqrt(2), 0, 0, 0, 1 / np.sqrt(2), 0.0)
        assert abs(pmax_by_type(StateType.TYPE2B, ji_alt) - 0.5) < 2e-8

    def test_type3a_w(self):
        a = 1 / np.sqrt(3)
        ji = invariants_from_acin(a, 0, a, a, 0, 0.0)
        assert abs(pmax_by_type(StateType.TYPE3A, ji) - 4.0 / 9.0) < 1e-12

    def test_types45_unavailable(self, rng):
        ji = invariants_from_acin(*random_acin(rng))
        assert pmax_by_type(StateType.TYPE5, ji) is None
        assert pmax_by_type(StateType.TYPE4A, ji) is None

    def test_table_limits(self, rng):
        # The triangle form reduces to the biseparable form when j2 = j3 = 0.
        for _ in range(5):
            j1 = float(rng.uniform(0, 0.25))
            ji = invariants_from_acin(0, np.sqrt(0.4), *np.sqrt([0.3, 0.3]), 0, 0.0)
            from gemkit.invariants import LuInvariants

            ji = LuInvariants(j1, 0.0, 0.0, 0.0, 0.0)
            tri = pmax_by_type(StateType.TYPE3A, ji)
            bisep = pmax_by_type(StateType.TYPE2A_J1, ji)
            assert abs(tri - bisep) < 1e-12

    def test_against_oracle(self, rng):
        cases = [((1, 4), StateType.TYPE3A), ((1, 2), StateType.TYPE3B_12),
                 ((1, 3), StateType.TYPE3B_13), ((2, 3), StateType.TYPE3B_23),
                 ((1, 2, 3), StateType.TYPE2B)]
        for zeros, t in cases:
            for _ in range(5):
                params = random_acin(rng, zeros=zeros)
                ji = invariants_from_acin(*params)
                psi = from_acin_params(*params)
                val = pmax_by_type(t, ji)
                assert abs(val - oracle_lambda_max(psi, CFG).lam_sq) < 1e-6

    def test_type4_phase_independence(self, rng):
        # Vanishing-coefficient families keep the same overlap for any phase.
        for zeros in ((4,), (2,), (3,)):
            lams = random_acin(rng, zeros=zeros)[:5]
            a = oracle_lambda_max(from_acin_params(*lams, 0.4), CFG).lam_sq
            b = oracle_lambda_max(from_acin_params(*lams, 2.3), CFG).lam_sq
            assert abs(a - b) < 1e-6


class TestTwoQubitPmax:
    def test_bell(self):
        assert abs(two_qubit_pmax(ghz_state(2)) - 0.5) < 1e-12

    def test_product(self):
        assert abs(two_qubit_pmax(PureState.from_amplitudes([1, 0, 0, 0])) - 1.0) < 1e-12

    def test_schmidt_coefficients(self):
        psi = PureState.from_amplitudes([0.8, 0, 0, 0.6])
        assert abs(two_qubit_pmax(psi) - 0.64) < 1e-12

    def test_agrees_with_invariant_formula(self, rng):
        for _ in range(20):
            psi = random_state(rng, 2)
            rho_a = psi.density_matrix().entries.reshape(2, 2, 2, 2)
            rho_a = np.trace(rho_a, axis1=1, axis2=3)
            j = float(np.linalg.det(rho_a).real)
            formula = 0.5 * (1.0 + np.sqrt(max(1.0 - 4 * j, 0.0)))
            assert abs(two_qubit_pmax(psi) - formula) < 1e-8


class TestNewType:
    def test_equal_coefficients_degenerate_to_ghz_form(self):
        form = newtype_standard_form(0.5, 0.5, 0.5, 0.5)
        l0, l1, l2, l3, l4 = form.lams
        assert abs(l1) < 1e-12 and abs(l2) < 1e-12 and abs(l3) < 1e-12
        assert abs(l0 - 1 / np.sqrt(2)) < 1e-12 and abs(l4 - 1 / np.sqrt(2)) < 1e-12

    def test_q_zero_reduces_to_triangle_type(self):
        a = 1 / np.sqrt(3)
        form = newtype_standard_form(a, a, a, 0.0)
        l0, l1, l2, l3, l4 = form.lams
        assert abs(l1) < 1e-12 and abs(l4) < 1e-12
        assert classify_type(*form.lams, form.phi) == StateType.TYPE3A

    def test_generic_constraint_residual(self):
        form = newtype_standard_form(0.6, 0.5, 0.4, np.sqrt(1 - 0.77))
        assert form.constraint_residual < 1e-9

    def test_standard_form_reproduces_state(self, rng):
        for _ in range(25):
            a, b, c, q = random_simplex(rng, 4)
            s = FourTerm(a, b, c, q)
            form = newtype_standard_form(a, b, c, q)
            assert form.constraint_residual < 1e-9
            direct = invariants_from_state(s.state()).array()
            via_form = invariants_from_acin(*form.lams, form.phi).array()
            assert np.abs(direct - via_form).max() < 1e-9

    def test_invariants_roundtrip(self, rng):
        for _ in range(25):
            a, b, c, q = random_simplex(rng, 4)
            ji = newtype_invariants(a, b, c, q)
            direct = invariants_from_state(FourTerm(a, b, c, q).state())
            assert np.abs(ji.array() - direct.array()).max() < 1e-9
            assert abs(abs(ji.j5) - 2 * np.sqrt(max(ji.j1 * ji.j2 * ji.j3, 0))) < 1e-9

    def test_negative_region_uses_opposite_phase(self):
        # (a^2+q^2-b^2-c^2)(ab-cq)(ac-bq) < 0 forces the pi phase; the zero
        # phase would describe a different state whose first invariant is the
        # region-split alternative expression.
        a, b, c = 0.5, 0.62, 0.5
        q = np.sqrt(1 - a * a - b * b - c * c)
        region = (a * a + q * q - b * b - c * c) * (a * b - c * q) * (a * c - b * q)
        assert region < 0
        form = newtype_standard_form(a, b, c, q)
        assert abs(form.phi - np.pi) < 1e-12
        ji = newtype_invariants(a, b, c, q)
        assert abs(ji.j1 - (a * q - b * c) ** 2) < 1e-12
        alt = (a * q - b * c) ** 2 * (
            1
            + 2 * (a * b - c * q) * (a * c - b * q) * (a * q + b * c)
            / ((a * b + c * q) * (a * c + b * q) * (a * q - b * c))
        ) ** 2
        doppel = invariants_from_acin(*form.lams, 0.0)
        assert abs(doppel.j1 - alt) < 1e-10

    def test_degenerate_pivot_rejected(self):
        with pytest.raises(InputError):
            newtype_standard_form(0.0, 1 / np.sqrt(2), 0.0, 1 / np.sqrt(2))

    def test_pmax_invariant_form(self, rng):
        a = 1 / np.sqrt(3)
        ji = newtype_invariants(a, a, a, 0.0)
        from gemkit import RegionLabel3

        val = pmax_newtype_invariant_form(ji, RegionLabel3.CONVEX_QUADRANGLE)
        assert abs(val - 4.0 / 9.0) < 1e-10
        ji_eq = newtype_invariants(0.5, 0.5, 0.5, 0.5)
        val_eq = pmax_newtype_invariant_form(ji_eq, RegionLabel3.SHARED_SURFACE_R0)
        assert abs(val_eq - 0.5) < 1e-10
        for _ in range(20):
            coeffs = random_simplex(rng, 4)
            s = FourTerm(*coeffs)
            lam_sq, label = lambda_sq_fourterm(s)
            ji_r = newtype_invariants(*coeffs)
            assert abs(pmax_newtype_invariant_form(ji_r, label) - lam_sq) < 1e-9

    def test_j4_zero_limit_matches_triangle_form(self):
        a = 1 / np.sqrt(3)
        ji = newtype_invariants(a, a, a, 0.0)
        from gemkit import RegionLabel3

        quad = pmax_newtype_invariant_form(ji, RegionLabel3.CONVEX_QUADRANGLE)
        tri = pmax_by_type(StateType.TYPE3A, ji)
        assert abs(quad - tri) < 1e-10
