import math

import numpy as np
import pytest

from src.linalg import partial_transpose
from src.models.nifg import (
    CoincidentParticlesError,
    GeometryConfig,
    InvalidCoefficientsError,
    NifgCoefficients,
    build_rho3,
    coefficients_from_geometry,
    coefficients_from_slater,
    entanglement_radius,
    entanglement_radius_diagnostics,
    negativity,
    partial_transpose_eigenvalues,
    ppt_condition,
    rho3_eigenvalues,
    rho3_explicit,
    rho3_pauli_form,
    slater_factor,
    slater_factor_quadrature,
    validity,
)


def test_slater_factor_limits():
    assert slater_factor(0.0) == 1.0
    assert abs(slater_factor(50.0)) < 2e-3
    with pytest.raises(ValueError):
        slater_factor(-1.0)


def test_slater_factor_matches_quadrature():
    for x in (0.005, 0.0099, 0.0101, 0.3, 1.7, 4.4934, 9.0):
        assert slater_factor(x) == pytest.approx(slater_factor_quadrature(x), abs=1e-10)


def test_slater_factor_accepts_arrays():
    xs = np.array([0.0, 0.005, 2.0])
    np.testing.assert_allclose(slater_factor(xs), [slater_factor(x) for x in xs])


def test_entanglement_radius():
    r = entanglement_radius()
    assert 1.7 < r < 1.9
    assert slater_factor(r) ** 2 == pytest.approx(0.5, abs=1e-10)


def test_radius_diagnostics_reports_missing_j1_root():
    diag = entanglement_radius_diagnostics()
    assert diag.j1_root is None
    assert diag.j1_max == pytest.approx(0.436, abs=2e-3)
    assert diag.f_root == pytest.approx(entanglement_radius())


def test_symmetric_slater_triple():
    s = 1 / math.sqrt(2)
    c = coefficients_from_slater(s, s, s)
    for p in c.as_tuple():
        assert p == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-12)


def test_geometry_separations():
    assert GeometryConfig.one_d(3.0, 1.0).separations() == (1.0, 3.0, 2.0)
    x12, x13, x23 = GeometryConfig.two_d(2.0, math.pi / 2).separations()
    assert x13 == 2.0
    assert x12 == pytest.approx(math.sqrt(2.0))
    assert x23 == pytest.approx(math.sqrt(2.0))


def test_geometry_validation():
    with pytest.raises(ValueError):
        GeometryConfig("3d", 1.0, kf_x=0.5)
    with pytest.raises(ValueError):
        GeometryConfig.two_d(1.0, 7.0)
    with pytest.raises(ValueError):
        GeometryConfig("1d", 1.0)


def test_coincident_particles():
    with pytest.raises(CoincidentParticlesError):
        coefficients_from_geometry(GeometryConfig.one_d(1.0, 0.0))
    with pytest.raises(CoincidentParticlesError):
        coefficients_from_geometry(GeometryConfig.one_d(1.0, 1.0))
    with pytest.raises(CoincidentParticlesError):
        coefficients_from_geometry(GeometryConfig.two_d(1.0, math.pi))


def test_rho3_forms_agree(triples):
    for c in triples:
        np.testing.assert_allclose(rho3_pauli_form(c), rho3_explicit(c), atol=1e-14)


def test_rho3_is_a_density_matrix(triples):
    for c in triples:
        rho = build_rho3(c)
        assert abs(np.trace(rho) - 1.0) < 1e-14
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-15)
        values = np.linalg.eigvalsh(rho)
        assert values.min() >= -1e-10
        np.testing.assert_allclose(values, rho3_eigenvalues(c), atol=1e-12)


def test_maximally_mixed_triple():
    c = NifgCoefficients(0.0, 0.0, 0.0)
    assert c.eta == 0.125
    np.testing.assert_allclose(build_rho3(c), np.eye(8) / 8)


def test_invalid_triples():
    for bad in ((0.8, -0.2, -0.2), (-0.9, 0.0, 0.0)):
        c = NifgCoefficients(*bad)
        assert not validity(c).valid
        with pytest.raises(InvalidCoefficientsError):
            build_rho3(c)


def test_ppt_closed_form_matches_spectrum(triples):
    extra = [NifgCoefficients(0.3, 0.3, 0.3), NifgCoefficients(-0.3, -0.3, -0.3), NifgCoefficients(0.5, 0.0, 0.0)]
    for c in triples + extra:
        rho = build_rho3(c)
        for party in (1, 2, 3):
            spectrum = np.linalg.eigvalsh(partial_transpose(rho, party))
            np.testing.assert_allclose(spectrum, partial_transpose_eigenvalues(c, party), atol=1e-12)
            assert ppt_condition(c, party) == bool(spectrum.min() >= -1e-10)


def test_negativity_vanishes_exactly_on_ppt(triples):
    for c in triples + [NifgCoefficients(0.5, 0.0, 0.0)]:
        for party in (1, 2, 3):
            n = negativity(c, party)
            if ppt_condition(c, party):
                assert n == pytest.approx(0.0, abs=1e-10)
            else:
                assert n > 0.0


def test_singlet_pair_is_npt():
    # a = 1 puts parties 1 and 2 in a singlet
    c = NifgCoefficients(1.0, 0.0, 0.0)
    assert validity(c).valid
    assert not ppt_condition(c, 1)
    assert ppt_condition(c, 3)


def test_far_band_coefficients_nearly_nonnegative():
    values = []
    for kf_r in np.arange(4.5, 5.01, 0.1):
        for kf_x in np.arange(0.1, kf_r, 0.1):
            if abs(kf_r - kf_x) < 1e-9:
                continue
            values.extend(coefficients_from_geometry(GeometryConfig.one_d(float(kf_r), float(kf_x))).as_tuple())
    assert min(values) > -5e-3
