"""
Cyclic complex Jacobi eigensolver for small Hermitian matrices.

The solver zeroes one off-diagonal pair at a time with a unitary rotation
that first removes the phase of the pivot and then applies the real Jacobi
angle. Sweeps repeat until the off-diagonal Frobenius norm falls below
the configured tolerance.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import HERMITIAN_TOL, JACOBI_MAX_SWEEPS, JACOBI_OFF_TOL

logger = logging.getLogger(__name__)


class DimensionError(ValueError):
    pass


class MatrixError(ValueError):
    pass


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix."""
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unit columns, same order
    sweeps: int = 0

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])

    def residual(self, m: np.ndarray) -> float:
        """Largest ||m v - lambda v|| over the stored pairs."""
        diff = m @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.max(np.linalg.norm(diff, axis=0)))

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def check_square(m: np.ndarray) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"Matrix must be square, got shape {m.shape}")


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Zero a[p, q] in place, accumulating the rotation into v."""
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    app, aqq = a[p, p].real, a[q, q].real
    theta = 0.5 * math.atan2(2.0 * r, aqq - app)
    c, s = math.cos(theta), math.sin(theta)

    # phase removal diag(1, conj(phase)) followed by [[c, s], [-s, c]]
    block = np.array(
        [[c, s], [-s * phase.conjugate(), c * phase.conjugate()]],
        dtype=np.complex128,
    )
    idx = [p, q]
    a[:, idx] = a[:, idx] @ block
    a[idx, :] = block.conj().T @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    v[:, idx] = v[:, idx] @ block


def hermitian_eigs(m: np.ndarray) -> Spectrum:
    """
    Eigenvalues and eigenvectors of a Hermitian matrix.

    Args:
        m: Square complex matrix, self-adjoint within HERMITIAN_TOL

    Returns:
        Spectrum with ascending eigenvalues and matching unit eigenvectors
    """
    m = np.asarray(m, dtype=np.complex128)
    check_square(m)
    if not is_hermitian(m):
        raise MatrixError("Matrix must be Hermitian")

    n = m.shape[0]
    a = 0.5 * (m + m.conj().T)
    v = np.eye(n, dtype=np.complex128)
    tol = JACOBI_OFF_TOL * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_norm(a) > tol:
        if sweeps >= JACOBI_MAX_SWEEPS:
            logger.warning(
                f"Jacobi did not converge after {sweeps} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e})"
            )
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0:
                    _rotate(a, v, p, q)
        sweeps += 1

    eigenvalues = np.diag(a).real.copy()
    order = np.argsort(eigenvalues, kind="stable")
    logger.debug(f"Jacobi converged in {sweeps} sweeps for {n}x{n} matrix")
    return Spectrum(
        eigenvalues=eigenvalues[order],
        eigenvectors=v[:, order],
        sweeps=sweeps,
    )
