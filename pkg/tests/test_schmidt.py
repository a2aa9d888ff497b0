import numpy as np
import pytest

from gemkit import (
    GsdLabel,
    InputError,
    OracleConfig,
    ProductState,
    PureState,
    SchmidtForm,
    WType3,
    from_gsd_coefficients,
    ghz_state,
    gsd_from_stationary,
    oracle_lambda_max,
    schmidt_inequality,
    second_variation_matrix,
    simple_case_bound,
    states_close,
    validate_gsd,
    w_state,
    wtype_canonical_forms,
)
from conftest import random_simplex

CFG = OracleConfig(n_starts=16, seed=29)


def w_special_product() -> ProductState:
    factor = [np.sqrt(2.0 / 3.0), np.sqrt(1.0 / 3.0)]
    return ProductState.from_vectors([factor] * 3)


class TestGsdFromStationary:
    def test_ghz_trivial(self):
        form = gsd_from_stationary(ghz_state(3), ProductState.from_vectors([[1, 0]] * 3))
        assert abs(form.l0 - 1 / np.sqrt(2)) < 1e-12
        assert form.l1 < 1e-12 and form.l2 < 1e-12 and form.l3 < 1e-12
        assert abs(abs(form.l4) - 1 / np.sqrt(2)) < 1e-12

    def test_w_special_point(self):
        form = gsd_from_stationary(w_state(3), w_special_product())
        assert abs(form.l0 - 2.0 / 3.0) < 1e-10
        for lam in (form.l1, form.l2, form.l3):
            assert abs(lam - 1.0 / 3.0) < 1e-10
        assert abs(abs(form.l4) - np.sqrt(2.0) / 3.0) < 1e-10
        assert -np.pi / 2 - 1e-9 <= np.angle(form.l4) <= np.pi / 2 + 1e-9

    def test_wtype_trivial_three_term(self):
        a, b, c = 0.7, 0.5, np.sqrt(1 - 0.49 - 0.25)
        amp = np.zeros(8)
        amp[0b100], amp[0b010], amp[0b001] = a, b, c
        psi = PureState.from_amplitudes(amp)
        start = ProductState.from_vectors([[0, 1], [1, 0], [1, 0]])
        form = gsd_from_stationary(psi, start)
        assert abs(form.l0 - a) < 1e-12
        assert abs(form.l1) < 1e-12
        assert abs(form.l4) < 1e-12
        assert {round(form.l2, 9), round(form.l3, 9)} == {round(b, 9), round(c, 9)}

    def test_rejects_non_stationary(self):
        start = ProductState.from_vectors([[1, 0], [0.8, 0.6], [1, 0]])
        with pytest.raises(InputError, match="not stationary"):
            gsd_from_stationary(ghz_state(3), start)

    def test_reconstruction_generic(self, rng):
        for _ in range(10):
            coeffs = random_simplex(rng, 4)
            amp = np.zeros(8)
            amp[0b100], amp[0b010], amp[0b001], amp[0b111] = coeffs
            psi = PureState.from_amplitudes(amp)
            best = oracle_lambda_max(psi, CFG)
            form = gsd_from_stationary(psi, best.product)
            assert states_close(form.reconstruct(), psi, tol=1e-9)
            assert abs(form.l0 - best.lam) < 1e-9


class TestWTypeCanonicalForms:
    def test_equal_w_has_four_forms(self):
        forms = wtype_canonical_forms(WType3(*[1 / np.sqrt(3)] * 3))
        assert len(forms) == 4
        flagged = [f for f in forms if f.maximal]
        assert len(flagged) == 1
        assert abs(flagged[0].l0 - 2.0 / 3.0) < 1e-10

    def test_obtuse_has_three_forms(self):
        a = 0.9
        b = c = np.sqrt((1 - 0.81) / 2)
        forms = wtype_canonical_forms(WType3(a, b, c))
        assert len(forms) == 3
        flagged = [f for f in forms if f.maximal]
        assert len(flagged) == 1
        assert abs(flagged[0].l0 - a) < 1e-12

    def test_right_triangle_boundary(self):
        forms = wtype_canonical_forms(WType3(1 / np.sqrt(2), 0.5, 0.5))
        assert len(forms) == 4
        special = forms[3]
        assert special.maximal
        assert abs(special.l0 - 1 / np.sqrt(2)) < 1e-9
        # The special solution has collapsed onto the trivial one; the stray
        # coefficient is sqrt(eps)-limited because a vanishing squared Bloch
        # quantity enters under a square root.
        assert abs(special.l4) < 1e-7

    def test_all_forms_reconstruct(self, rng):
        for _ in range(10):
            s = WType3(*random_simplex(rng, 3))
            psi = s.state()
            for form in wtype_canonical_forms(s):
                assert states_close(form.reconstruct(), psi, tol=1e-9)

    def test_flagged_form_matches_oracle_across_grid(self, rng):
        for _ in range(30):
            s = WType3(*random_simplex(rng, 3))
            forms = wtype_canonical_forms(s)
            flagged = next(f for f in forms if f.maximal)
            best = oracle_lambda_max(s.state(), CFG)
            assert abs(flagged.l0 - best.lam) < 1e-6


class TestSecondVariation:
    def test_ghz_positive_definite(self):
        form = gsd_from_stationary(ghz_state(3), ProductState.from_vectors([[1, 0]] * 3))
        mat = second_variation_matrix(form)
        assert np.allclose(np.diag(mat.a), 1 / np.sqrt(2), atol=1e-12)
        assert mat.is_positive()
        assert mat.det_condition() > 0

    def test_w_saturates(self):
        form = gsd_from_stationary(w_state(3), w_special_product())
        mat = second_variation_matrix(form)
        assert abs(mat.det_condition()) < 1e-10
        assert mat.is_positive(tol=1e-9)

    def test_failing_determinant(self):
        # With leading 0.5 and mixed coefficients 0.4 the determinant turns
        # negative (note these numbers cannot belong to a normalized form;
        # the matrix condition is what is being exercised).
        from gemkit import SecondVariationMatrix

        mat = SecondVariationMatrix(
            np.array([[0.5, -0.4, -0.4], [-0.4, 0.5, -0.4], [-0.4, -0.4, 0.5]])
        )
        assert mat.det_condition() < 0
        assert not mat.is_positive()

    def test_matrix_layout(self):
        form = _form_from_coefficients(0.7, 0.3, 0.2, 0.1, np.sqrt(1 - 0.63))
        mat = second_variation_matrix(form).a
        assert mat[0, 1] == -form.l3
        assert mat[0, 2] == -form.l2
        assert mat[1, 2] == -form.l1


def _form_from_coefficients(l0, l1, l2, l3, l4) -> SchmidtForm:
    zero, one = [1, 0], [0, 1]
    from gemkit import Qubit

    bases = tuple(
        (Qubit.from_vector(zero), Qubit.from_vector(one)) for _ in range(3)
    )
    return SchmidtForm(l0=l0, l1=l1, l2=l2, l3=l3, l4=complex(l4), bases=bases)


class TestSchmidtInequality:
    def test_w_saturated(self):
        form = gsd_from_stationary(w_state(3), w_special_product())
        holds, slack = schmidt_inequality(form)
        assert holds
        assert abs(slack) < 1e-10

    def test_ghz_slack(self):
        form = gsd_from_stationary(ghz_state(3), ProductState.from_vectors([[1, 0]] * 3))
        holds, slack = schmidt_inequality(form)
        assert holds
        assert abs(slack - 0.5) < 1e-10

    def test_counterexample_coefficients_saturate(self):
        lams = np.array([2, 1, 1, 1, 2]) / np.sqrt(11)
        form = _form_from_coefficients(*lams)
        holds, slack = schmidt_inequality(form)
        assert holds
        assert abs(slack) < 1e-12

    def test_triangle_inequality_grid(self, rng):
        # Acute coefficient triangles satisfy the special-solution inequality.
        count = 0
        while count < 100:
            a, b, c = random_simplex(rng, 3)
            r_a = b * b + c * c - a * a
            r_b = a * a + c * c - b * b
            r_c = a * a + b * b - c * c
            if min(r_a, r_b, r_c) < 0:
                continue
            count += 1
            lhs = 4 * (a * b * c) ** 2
            rhs = (a * r_a) ** 2 + (b * r_b) ** 2 + (c * r_c) ** 2 + r_a * r_b * r_c
            assert lhs >= rhs - 1e-12


class TestSimpleCaseBound:
    def test_holding_case(self):
        form = _form_from_coefficients(0.8, 0.36, 0.0, 0.0, 0.48)
        holds, competitor = simple_case_bound(form)
        assert holds
        assert abs(competitor - 0.6) < 1e-12

    def test_violated_case(self):
        with pytest.raises(InputError):
            # l0 < |l4| is rejected at construction; build the competing data
            # directly instead.
            _form_from_coefficients(0.5, 0.5, 0.0, 0.0, np.sqrt(0.5))
        holds = 0.5**2 >= 0.5**2 + 0.5
        assert not holds

    def test_trivial(self):
        form = _form_from_coefficients(1.0, 0.0, 0.0, 0.0, 0.0)
        holds, competitor = simple_case_bound(form)
        assert holds
        assert competitor == 0.0

    def test_requires_simple_case(self):
        form = _form_from_coefficients(0.8, 0.1, 0.3, 0.0, np.sqrt(1 - 0.74))
        with pytest.raises(InputError):
            simple_case_bound(form)


class TestValidateGsd:
    def test_w_certified(self):
        form = gsd_from_stationary(w_state(3), w_special_product())
        verdict = validate_gsd(w_state(3), form, CFG)
        assert verdict.label == GsdLabel.CERTIFIED_MAXIMUM
        assert verdict.is_valid

    def test_ghz_certified(self):
        form = gsd_from_stationary(ghz_state(3), ProductState.from_vectors([[1, 0]] * 3))
        verdict = validate_gsd(ghz_state(3), form, CFG)
        assert verdict.label == GsdLabel.CERTIFIED_MAXIMUM

    def test_counterexample_rejected_by_oracle(self):
        # The saturated five-term form passes every necessary condition yet
        # its leading coefficient is not the maximal overlap.
        lams = np.array([2, 1, 1, 1, 2]) / np.sqrt(11)
        psi = from_gsd_coefficients(*lams)
        form = _form_from_coefficients(*lams)
        verdict = validate_gsd(psi, form, OracleConfig(n_starts=32, seed=31))
        assert verdict.label == GsdLabel.INCONCLUSIVE
        assert not verdict.is_valid
        expected_gap = np.sqrt(36.0 / 55.0) - 2.0 / np.sqrt(11.0)
        assert abs(verdict.oracle_gap - expected_gap) < 1e-8

    def test_non_maximal_trivial_form_fails_conditions(self):
        # The basis form of a subdominant coefficient violates the inequality.
        a, b, c = 0.35, 0.45, np.sqrt(1 - 0.35**2 - 0.45**2)
        s = WType3(a, b, c)
        forms = wtype_canonical_forms(s)
        verdict = validate_gsd(s.state(), forms[0], CFG)
        assert verdict.label == GsdLabel.NECESSARY_CONDITIONS_FAILED

    def test_reconstruction_mismatch_rejected(self):
        form = gsd_from_stationary(ghz_state(3), ProductState.from_vectors([[1, 0]] * 3))
        with pytest.raises(InputError):
            validate_gsd(w_state(3), form, CFG)
