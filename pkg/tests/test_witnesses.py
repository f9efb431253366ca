import math

import numpy as np
import pytest

from src.linalg import SX, SY, expectation, kron_all
from src.models.nifg import GeometryConfig, InvalidCoefficientsError, NifgCoefficients, build_rho3, coefficients_from_geometry
from src.models.rotations import (
    local_rotation,
    minimize_over_rotations,
    rotated_expectation,
    uniform_rotation,
)
from src.models.states import NormalizationError, haar_su2_pairs, w_basis_states
from src.models.witnesses import (
    GHZ_PROJECTOR0,
    PANEL,
    STAB_GHZ0,
    STAB_W0,
    W_GEN,
    W_SPIN0,
    ClassTarget,
    DetectedClass,
    WitnessFamily,
    WitnessSpec,
    classify,
    classify_density,
    ghz_projector_ew,
    purity_bound_check,
    rotated_trace_ghz0,
    rotated_trace_w_gen,
    rotated_trace_w_spin0,
    stab_ew,
    stabilizers,
    w_chain,
    w_chain_counterexample,
    w_spin,
)


def test_panel_closed_forms_match_matrices(triples):
    for c in triples:
        rho = build_rho3(c)
        for spec in PANEL:
            assert spec.trace(c) == pytest.approx(expectation(spec.operator(), rho), abs=1e-10)


def test_canonical_closed_forms(triples):
    for c in triples:
        assert W_GEN.trace(c) == pytest.approx(1 + math.sqrt(5) - 3 * (c.a + c.c), abs=1e-12)
        assert W_SPIN0.trace(c) == pytest.approx(1 + math.sqrt(8) - 3 * (c.a + c.b - c.c), abs=1e-12)
        assert GHZ_PROJECTOR0.trace(c) == pytest.approx(0.75 + 2 * c.eta, abs=1e-12)
        assert STAB_W0.trace(c) == pytest.approx(math.sqrt(2) - c.a, abs=1e-12)
        assert STAB_GHZ0.trace(c) == pytest.approx(2.98 - c.a, abs=1e-12)


def test_stabilizer_combination_is_minus_a(triples):
    s1, s2, s12 = stabilizers()
    for c in triples:
        assert expectation(s1 + s2 - s12, build_rho3(c)) == pytest.approx(-c.a, abs=1e-12)


def test_stabilizer_product_is_minus_yyx():
    s1, s2, s12 = stabilizers()
    np.testing.assert_allclose(s12, -kron_all(SY, SY, SX), atol=1e-15)


def test_spin_chain_spectrum(rng):
    for _ in range(5):
        params = rng.normal(size=4)
        spec = WitnessSpec(WitnessFamily.SPIN_CHAIN, tuple(params))
        e1, e2, e3 = spec.eigenvalue_list()
        expected = sorted([e1] * 4 + [e2] * 2 + [e3] * 2)
        np.testing.assert_allclose(np.linalg.eigvalsh(w_spin(*params)), expected, atol=1e-10)


def test_canonical_spin_witness_has_negative_eigenvalue():
    assert min(W_SPIN0.eigenvalue_list()) == pytest.approx(math.sqrt(8) - 4)


def test_w_chain_spectrum():
    c0 = 1 + math.sqrt(5)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(w_chain(c0)), [c0 - 4] * 2 + [c0] * 2 + [c0 + 2] * 4, atol=1e-12
    )
    assert sorted(W_GEN.eigenvalue_list()) == pytest.approx([c0 - 4, c0, c0 + 2])


def test_w_chain_counterexample():
    for c0 in (1 + math.sqrt(5), 4.0, 2.0):
        assert w_chain_counterexample(c0) == pytest.approx(c0 - 4, abs=1e-12)


def test_ghz_projector_spectrum(rng):
    a0, a1, a2, a3, a4 = rng.normal(size=5)
    expected = sorted([a0, a0 + a2, a0 + a3, a0 + a4] + [a0 + 1.5 * a1] * 4)
    np.testing.assert_allclose(np.linalg.eigvalsh(ghz_projector_ew(a0, a1, a2, a3, a4)), expected, atol=1e-12)


def test_ghz_projector_on_psi_minus():
    _, _, psi_minus = w_basis_states()
    value = expectation(GHZ_PROJECTOR0.operator(), np.outer(psi_minus, psi_minus.conj()))
    assert value == pytest.approx(-0.25, abs=1e-12)


def test_stabilizer_spectrum(rng):
    b = rng.normal(size=4)
    values = WitnessSpec(WitnessFamily.STABILIZER, tuple(b)).eigenvalue_list()
    np.testing.assert_allclose(np.linalg.eigvalsh(stab_ew(*b)), sorted(values * 2), atol=1e-12)


def test_spec_checks_parameter_count():
    with pytest.raises(ValueError):
        WitnessSpec(WitnessFamily.STABILIZER, (1.0, 2.0))


def test_rotated_traces_are_invariant(rng, triples):
    alphas, betas = haar_su2_pairs(rng, 4)
    for c in triples[:4]:
        rho = build_rho3(c)
        for alpha, beta in zip(alphas, betas):
            for spec, closed in ((W_GEN, rotated_trace_w_gen), (W_SPIN0, rotated_trace_w_spin0),
                                 (GHZ_PROJECTOR0, rotated_trace_ghz0)):
                matrix = rotated_expectation(spec.operator(), rho, alpha, beta)
                assert closed(c, alpha, beta) == pytest.approx(matrix, abs=1e-10)
                assert matrix == pytest.approx(spec.trace(c), abs=1e-10)


def test_rotated_trace_checks_norm(triples):
    with pytest.raises(NormalizationError):
        rotated_trace_w_gen(triples[0], 1.0, 0.5)


def test_rotations_are_unitary(rng):
    alpha, beta = haar_su2_pairs(rng, 3)
    for u in (uniform_rotation(alpha[0], beta[0]), local_rotation(list(zip(alpha, beta)))):
        np.testing.assert_allclose(u @ u.conj().T, np.eye(8), atol=1e-12)


def test_ghz_witness_never_detects_rho3(triples):
    for c in triples:
        search = minimize_over_rotations(GHZ_PROJECTOR0.operator(), build_rho3(c), grid=8)
        assert search.value >= -1e-9
        assert search.value == pytest.approx(0.75 + 2 * c.eta, abs=1e-8)
        assert search.grid_min <= search.grid_max + 1e-12


def test_short_distance_window_detects_w_minus_b():
    for kf_x in np.arange(0.01, 0.0901, 0.01):
        c = coefficients_from_geometry(GeometryConfig.one_d(0.1, float(kf_x)))
        assert W_GEN.trace(c) < -1e-9
    verdict = classify(coefficients_from_geometry(GeometryConfig.one_d(0.1, 0.05)))
    assert verdict.detected_class is DetectedClass.W_MINUS_B
    assert verdict.witness_name == "w_gen" or verdict.values[verdict.witness_name] <= verdict.values["w_gen"]
    assert verdict.witness_value < -0.5


def test_far_geometries_are_not_detected():
    for kf_r in (4.5, 4.75, 5.0):
        for kf_x in (0.5, 1.5, 2.5, 3.5):
            verdict = classify(coefficients_from_geometry(GeometryConfig.one_d(kf_r, kf_x)))
            assert verdict.detected_class is DetectedClass.NONE
            assert not verdict.ppt_entangled


def test_verdict_invariants(triples):
    for c in triples:
        verdict = classify(c)
        if verdict.ppt_entangled:
            assert verdict.detected
        if verdict.detected_class is DetectedClass.NONE:
            assert verdict.witness_name is None
        else:
            assert verdict.witness_value < -1e-9


def test_classify_density_matches_classify(triples):
    c = triples[0]
    a = classify(c)
    b = classify_density(build_rho3(c))
    assert a.detected_class is b.detected_class
    assert a.ppt_flags == b.ppt_flags


def test_classify_rejects_invalid_triple():
    with pytest.raises(InvalidCoefficientsError):
        classify(NifgCoefficients(0.8, -0.2, -0.2))


def test_purity_bound(triples):
    for c in triples[:3]:
        result = purity_bound_check(c, samples=200, seed=3, refine_iterations=2)
        assert result.uniform_value == pytest.approx(c.eta, abs=1e-12)
        assert result.sampled_max <= result.max_value
        assert result.max_value <= result.lambda_max + 1e-12
        assert result.lambda_max <= 0.5 + 1e-12
        assert result.max_value < 1 - 1e-6


def test_purity_of_maximally_mixed_state():
    result = purity_bound_check(NifgCoefficients(0.0, 0.0, 0.0), samples=50, seed=1, refine_iterations=1)
    assert result.max_value == pytest.approx(0.125, abs=1e-12)


def test_targets():
    assert GHZ_PROJECTOR0.target is ClassTarget.GHZ_EW
    assert STAB_GHZ0.target is ClassTarget.GHZ_EW
    assert W_GEN.target is ClassTarget.W_EW


def test_purity_bound_needs_samples(triples):
    with pytest.raises(ValueError):
        purity_bound_check(triples[0], samples=0, seed=1)
