import numpy as np
import pytest

from src.linalg import DimensionError, expectation, pure_expectation
from src.models.states import (
    SPLITS,
    GhzParams,
    LocalSU2,
    NormalizationError,
    PureState,
    WParams,
    basis_state,
    biseparable_state,
    draw_biseparable_vectors,
    draw_product_vectors,
    draw_w_vectors,
    generic_ghz,
    generic_w,
    haar_su2_pairs,
    product_state,
    refine_maximum,
    sample_biseparable,
    sample_biseparable_pure,
    sample_w_mixed,
    singlet_projector,
    spin_product,
    w_amplitudes,
    w_basis_states,
    w_class_exhibit,
    w_core,
    w_pair_expectations,
    w_projector_expectations,
    w_stabilizer_expectations,
    w_state,
)
from src.models.witnesses import GHZ_PROJECTOR0, W_GEN, stabilizers

PAIRS = ((1, 2), (1, 3), (2, 3))


def _random_w(rng):
    p = WParams.from_raw(rng.normal(size=4))
    alpha, beta = haar_su2_pairs(rng, 3)
    return p, LocalSU2(tuple(zip(alpha, beta)))


def test_spin_product_spectrum():
    for i, j in PAIRS:
        values = np.linalg.eigvalsh(spin_product(i, j))
        np.testing.assert_allclose(values, [-3, -3, 1, 1, 1, 1, 1, 1], atol=1e-12)


def test_singlet_projector_identity():
    for i, j in PAIRS:
        proj = singlet_projector(i, j)
        np.testing.assert_allclose(proj, (np.eye(8) - spin_product(i, j)) / 4, atol=1e-14)
        np.testing.assert_allclose(proj @ proj, proj, atol=1e-14)
    with pytest.raises(DimensionError):
        singlet_projector(1, 1)


def test_pure_state_checks_norm():
    PureState(basis_state("101"))
    with pytest.raises(NormalizationError):
        PureState(2 * basis_state("101"))
    with pytest.raises(NormalizationError):
        PureState(np.ones(4) / 2)


def test_param_validation():
    with pytest.raises(NormalizationError):
        WParams(-1.0, 0.0, 0.0, 0.0)
    with pytest.raises(NormalizationError):
        WParams(0.5, 0.5, 0.0, 0.0)
    with pytest.raises(NormalizationError):
        GhzParams(1.0, 0.0, 0.0, 0.0, 0.0, theta=4.0)
    with pytest.raises(NormalizationError):
        LocalSU2(((1.0, 1.0), (1.0, 0.0), (1.0, 0.0)))


def test_identity_rotation_keeps_moduli():
    p = WParams(0.5, 0.5, 0.5, 0.5)
    state = generic_w(p, LocalSU2.identity())
    np.testing.assert_allclose(np.abs(state.amplitudes), np.abs(w_core(p)), atol=1e-15)


def test_closed_form_amplitudes_match_local_operator(rng):
    for _ in range(20):
        p, u = _random_w(rng)
        np.testing.assert_allclose(w_amplitudes(p, u), u.operator() @ w_core(p), atol=1e-12)


def test_generic_ghz_is_normalized(rng):
    lam = np.abs(rng.normal(size=5))
    lam /= np.linalg.norm(lam)
    _, u = _random_w(rng)
    state = generic_ghz(GhzParams(*lam, theta=1.0), u)
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-12


def test_w_expectation_formulas_match_matrices(rng):
    w1, w2, psi_minus = w_basis_states()
    s1, s2, s12 = stabilizers()
    singlets = sum(singlet_projector(i, j) for i, j in PAIRS)
    for _ in range(50):
        p, u = _random_w(rng)
        state = generic_w(p, u)
        amps, rho = state.amplitudes, state.density()

        pairs = w_pair_expectations(amps)
        for value, (i, j) in zip(pairs, PAIRS):
            assert value == pytest.approx(expectation(spin_product(i, j), rho), abs=1e-10)

        stab = w_stabilizer_expectations(amps)
        for value, op in zip(stab, (s1, s2, s12)):
            assert value == pytest.approx(expectation(op, rho), abs=1e-10)

        proj = w_projector_expectations(amps)
        ops = (2 * singlets, 3 * np.outer(w1, w1), 3 * np.outer(w2, w2), 2 * np.outer(psi_minus, psi_minus))
        for value, op in zip(proj, ops):
            assert value == pytest.approx(expectation(op, rho), abs=1e-10)


def test_psi_minus_overlap_with_w_class_bounded(rng):
    _, _, psi_minus = w_basis_states()
    states = w_state(draw_w_vectors(rng, 2000))
    overlaps = np.abs(states @ psi_minus.conj()) ** 2
    assert overlaps.max() <= 0.75 + 1e-12


def test_w_class_exhibit_is_chain_ground_state():
    params, local, state = w_class_exhibit()
    target = (basis_state("100") - 2 * basis_state("010") + basis_state("001")) / np.sqrt(6)
    np.testing.assert_allclose(np.abs(state.amplitudes), np.abs(target), atol=1e-12)
    assert abs(abs(np.vdot(target, state.amplitudes)) - 1.0) < 1e-12
    chain = spin_product(1, 2) + spin_product(2, 3)
    assert expectation(chain, state.density()) == pytest.approx(-4.0, abs=1e-12)


def test_biseparable_state_is_product_across_split(rng):
    x = draw_biseparable_vectors(rng, 1)[0]
    for split in SPLITS:
        psi = biseparable_state(split, x)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
        t = np.moveaxis(psi.reshape(2, 2, 2), split - 1, 0).reshape(2, 4)
        singular = np.linalg.svd(t, compute_uv=False)
        assert singular[1] < 1e-12


def _second_schmidt(psi, party):
    t = np.moveaxis(psi.reshape(2, 2, 2), party - 1, 0).reshape(2, 4)
    return np.linalg.svd(t, compute_uv=False)[1]


def test_product_state_is_separable_across_every_cut(rng):
    x = draw_product_vectors(rng, 3)
    batch = product_state(x)
    for k in range(3):
        psi = product_state(x[k])
        np.testing.assert_allclose(batch[k], psi, atol=1e-15)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
        for party in (1, 2, 3):
            assert _second_schmidt(psi, party) < 1e-12


def test_biseparable_sampler_draws_every_kind():
    rng = np.random.default_rng(0)
    samples = [sample_biseparable_pure(rng) for _ in range(200)]
    assert {s.label for s in samples} == {"product", "split-1", "split-2", "split-3"}
    for s in samples:
        cuts = [_second_schmidt(s.state, party) for party in (1, 2, 3)]
        if s.label == "product":
            assert max(cuts) < 1e-12
        else:
            assert cuts[int(s.label[-1]) - 1] < 1e-12


def test_w_gen_nonnegative_on_biseparable_mixtures(rng):
    op = W_GEN.operator()
    values = [expectation(op, sample_biseparable(rng)) for _ in range(300)]
    assert min(values) >= -1e-9


def test_ghz_projector_witness_nonnegative_on_w_mixtures(rng):
    op = GHZ_PROJECTOR0.operator()
    values = [expectation(op, sample_w_mixed(rng)) for _ in range(300)]
    assert min(values) >= -1e-9


def test_batched_builders_match_single(rng):
    vectors = draw_w_vectors(rng, 4)
    batch = w_state(vectors)
    for k in range(4):
        np.testing.assert_allclose(batch[k], w_state(vectors[k]), atol=1e-13)


def test_mixed_samplers_are_density_matrices(rng):
    for sampler in (sample_biseparable, sample_w_mixed):
        rho = sampler(rng)
        assert abs(np.trace(rho) - 1.0) < 1e-12
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-15)
        assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_samplers_are_seed_deterministic():
    a = sample_w_mixed(np.random.default_rng(7))
    b = sample_w_mixed(np.random.default_rng(7))
    np.testing.assert_array_equal(a, b)


def test_refine_maximum_never_lowers(rng):
    op = spin_product(2, 3) - spin_product(1, 2) - spin_product(1, 3)

    def objective(psi):
        return float(pure_expectation(op, psi))

    x0 = draw_biseparable_vectors(rng, 1)[0]

    def build(x):
        return biseparable_state(3, x)

    start = objective(build(x0))
    x, best = refine_maximum(objective, build, x0, iterations=3)
    assert best >= start
    assert objective(build(x)) == pytest.approx(best, abs=1e-12)
