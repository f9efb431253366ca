"""
Dense operators on three qubits.

Party 1 is the most significant bit of the computational index |ijk>.
"""
from functools import reduce

import numpy as np

from ..config import IMAG_RESIDUE_TOL
from .jacobi import DimensionError, MatrixError, check_square, hermitian_eigs, is_hermitian

ComplexMatrix = np.ndarray

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SX, SY, SZ)

N_PARTIES = 3


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    return np.kron(a, b)


def kron_all(*ms: ComplexMatrix) -> ComplexMatrix:
    """Left fold of kron over the arguments."""
    if not ms:
        raise DimensionError("kron_all needs at least one factor")
    return reduce(np.kron, ms)


def _check_party(party: int) -> None:
    if party not in (1, 2, 3):
        raise DimensionError(f"Party must be 1, 2 or 3, got {party}")


def embed(op: ComplexMatrix, party: int) -> ComplexMatrix:
    """Single-qubit operator acting on one party of three."""
    _check_party(party)
    factors = [I2] * N_PARTIES
    factors[party - 1] = op
    return kron_all(*factors)


def embed_pair(op4: ComplexMatrix, i: int, j: int) -> ComplexMatrix:
    """
    Two-qubit operator placed on parties i and j.

    The first tensor factor of op4 acts on party i.
    """
    _check_party(i)
    _check_party(j)
    if i == j:
        raise DimensionError("Pair parties must differ")
    if op4.shape != (4, 4):
        raise DimensionError(f"Pair operator must be 4x4, got {op4.shape}")
    k = ({1, 2, 3} - {i, j}).pop()
    # tensor indices: (out_i, out_j, in_i, in_j) -> full 3-party tensor
    t = np.einsum("abcd,ef->abecdf", op4.reshape(2, 2, 2, 2), I2)
    # axes now ordered (i, j, k) for outputs and inputs; permute to (1, 2, 3)
    order = [i - 1, j - 1, k - 1]
    perm = np.argsort(order)
    t = t.transpose(list(perm) + [3 + p for p in perm])
    return t.reshape(8, 8)


def projector(vec: np.ndarray) -> ComplexMatrix:
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return np.outer(vec, vec.conj())


def partial_transpose(rho: ComplexMatrix, party: int) -> ComplexMatrix:
    """Transpose the bra and ket indices of one party."""
    _check_party(party)
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (8, 8):
        raise DimensionError(f"Three-qubit operator must be 8x8, got {rho.shape}")
    t = rho.reshape([2] * (2 * N_PARTIES))
    t = np.swapaxes(t, party - 1, party - 1 + N_PARTIES)
    return t.reshape(8, 8)


def trace_norm(m: ComplexMatrix) -> float:
    return float(np.sum(np.abs(hermitian_eigs(m).eigenvalues)))


def expectation(op: ComplexMatrix, rho: ComplexMatrix) -> float:
    """
    Real expectation value Tr(op rho).

    Raises:
        DimensionError: shapes differ or are not square
        MatrixError: imaginary part above IMAG_RESIDUE_TOL
    """
    op = np.asarray(op)
    rho = np.asarray(rho)
    check_square(op)
    if op.shape != rho.shape:
        raise DimensionError(f"Shape mismatch: {op.shape} vs {rho.shape}")
    value = np.einsum("ij,ji->", op, rho)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise MatrixError(f"Expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)


def pure_expectation(op: ComplexMatrix, psi: np.ndarray) -> float:
    """<psi|op|psi> for a normalized vector or a batch of row vectors."""
    psi = np.asarray(psi, dtype=np.complex128)
    values = np.einsum("...i,ij,...j->...", psi.conj(), op, psi)
    return values.real


__all__ = [
    "ComplexMatrix",
    "I2",
    "SX",
    "SY",
    "SZ",
    "PAULIS",
    "kron",
    "kron_all",
    "embed",
    "embed_pair",
    "projector",
    "partial_transpose",
    "trace_norm",
    "expectation",
    "pure_expectation",
    "is_hermitian",
]
