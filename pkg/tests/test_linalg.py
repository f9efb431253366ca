import numpy as np
import pytest

from src.linalg import (
    I2,
    SX,
    SY,
    SZ,
    DimensionError,
    MatrixError,
    embed,
    embed_pair,
    expectation,
    hermitian_eigs,
    is_hermitian,
    kron,
    kron_all,
    partial_transpose,
    trace_norm,
)

from .conftest import random_hermitian


def test_kron_all_is_left_fold():
    np.testing.assert_allclose(kron_all(SX, SY, SZ), kron(kron(SX, SY), SZ))


def test_kron_all_needs_a_factor():
    with pytest.raises(DimensionError):
        kron_all()


def test_jacobi_matches_numpy(rng):
    for _ in range(5):
        m = random_hermitian(rng)
        spec = hermitian_eigs(m)
        np.testing.assert_allclose(spec.eigenvalues, np.linalg.eigvalsh(m), atol=1e-10)
        assert spec.residual(m) < 1e-9
        np.testing.assert_allclose(spec.reconstruct(), m, atol=1e-9)


def test_jacobi_eigenvalues_ascending(rng):
    spec = hermitian_eigs(random_hermitian(rng, 4))
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert spec.min == spec.eigenvalues[0]
    assert spec.max == spec.eigenvalues[-1]


def test_jacobi_rejects_non_hermitian():
    m = np.array([[1.0, 2.0], [0.0, 1.0]], dtype=np.complex128)
    assert not is_hermitian(m)
    with pytest.raises(MatrixError):
        hermitian_eigs(m)


def test_jacobi_diagonal_input():
    spec = hermitian_eigs(np.diag([3.0, -1.0, 2.0]).astype(np.complex128))
    np.testing.assert_allclose(spec.eigenvalues, [-1.0, 2.0, 3.0])


def test_partial_transpose_involution_and_trace(rng):
    a = random_hermitian(rng)
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    for party in (1, 2, 3):
        pt = partial_transpose(rho, party)
        np.testing.assert_allclose(partial_transpose(pt, party), rho, atol=1e-15)
        assert abs(np.trace(pt) - 1.0) < 1e-12
        assert is_hermitian(pt)


def test_partial_transpose_on_product_operator():
    op = kron_all(SY, SX, SZ)
    # transposing party 1 flips the sign of sigma_y only
    np.testing.assert_allclose(partial_transpose(op, 1), -op)
    np.testing.assert_allclose(partial_transpose(op, 2), op)


def test_partial_transpose_bad_party():
    with pytest.raises(DimensionError):
        partial_transpose(np.eye(8), 4)


def test_embed_pair_orders_factors():
    np.testing.assert_allclose(embed_pair(kron(SX, SZ), 1, 2), kron_all(SX, SZ, I2))
    np.testing.assert_allclose(embed_pair(kron(SX, SZ), 2, 1), kron_all(SZ, SX, I2))
    np.testing.assert_allclose(embed_pair(kron(SX, SZ), 1, 3), kron_all(SX, I2, SZ))
    np.testing.assert_allclose(embed(SY, 3), kron_all(I2, I2, SY))


def test_embed_pair_same_party():
    with pytest.raises(DimensionError):
        embed_pair(kron(SX, SX), 2, 2)


def test_expectation_real_and_checked():
    rho = np.eye(8, dtype=np.complex128) / 8
    assert expectation(kron_all(SZ, SZ, I2), rho) == pytest.approx(0.0)
    assert expectation(np.eye(8), rho) == pytest.approx(1.0)
    with pytest.raises(MatrixError):
        expectation(1j * np.eye(8), rho)
    with pytest.raises(DimensionError):
        expectation(np.eye(4), rho)


def test_trace_norm_bounds_trace(rng):
    m = random_hermitian(rng)
    assert trace_norm(m) >= abs(np.trace(m).real) - 1e-12
    np.testing.assert_allclose(trace_norm(np.diag([1.0, -2.0, 0.5])), 3.5)
