"""
Local SU(2) rotations of three-qubit operators and the rotation search.

A rotation is parametrized by alpha = cos t, beta = sin t e^{i phi} with
t in [0, pi/2] and phi in [0, 2pi), and applied as u x u x u.
"""
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from ..config import NELDER_MEAD_TOL, NORM_TOL, ROTATION_GRID
from ..linalg import expectation
from .states import NormalizationError

logger = logging.getLogger(__name__)


def check_pair(alpha: complex, beta: complex) -> None:
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise NormalizationError(f"|alpha|^2 + |beta|^2 = {norm:.15f}")


def su2_block(alpha, beta) -> np.ndarray:
    """[[conj(beta), alpha], [-conj(alpha), beta]], broadcasting over inputs."""
    alpha = np.asarray(alpha, dtype=np.complex128)
    beta = np.asarray(beta, dtype=np.complex128)
    top = np.stack([beta.conj(), alpha], axis=-1)
    bottom = np.stack([-alpha.conj(), beta], axis=-1)
    return np.stack([top, bottom], axis=-2)


def pair_from_angles(t, phi) -> Tuple[np.ndarray, np.ndarray]:
    t = np.asarray(t, dtype=float)
    return np.cos(t).astype(np.complex128), np.sin(t) * np.exp(1j * np.asarray(phi, dtype=float))


def uniform_rotation(alpha, beta) -> np.ndarray:
    """u x u x u, or a batch of them for array inputs."""
    u = su2_block(alpha, beta)
    out = np.einsum("...ad,...be,...cf->...abcdef", u, u, u)
    return out.reshape(out.shape[:-6] + (8, 8))


def local_rotation(pairs: Sequence[Tuple[complex, complex]]) -> np.ndarray:
    """Separate SU(2) block on each party."""
    if len(pairs) != 3:
        raise NormalizationError(f"Need 3 (alpha, beta) pairs, got {len(pairs)}")
    blocks = []
    for alpha, beta in pairs:
        check_pair(alpha, beta)
        blocks.append(su2_block(alpha, beta))
    return np.kron(np.kron(blocks[0], blocks[1]), blocks[2])


def rotate(rho: np.ndarray, u: np.ndarray) -> np.ndarray:
    return u @ rho @ u.conj().T


def rotated_expectation(op: np.ndarray, rho: np.ndarray, alpha: complex, beta: complex) -> float:
    """Tr(op U rho U^dagger) with U = u x u x u."""
    check_pair(alpha, beta)
    return expectation(op, rotate(rho, uniform_rotation(alpha, beta)))


def batch_rotated_expectations(op: np.ndarray, rho: np.ndarray, t, phi) -> np.ndarray:
    alpha, beta = pair_from_angles(t, phi)
    u = uniform_rotation(alpha, beta)
    values = np.einsum("ij,njk,kl,nil->n", op, u, rho, u.conj(), optimize=True)
    return values.real


@dataclass
class RotationSearch:
    """Minimum of a rotated expectation over the (t, phi) rectangle."""
    t: float
    phi: float
    value: float
    grid_min: float
    grid_max: float

    @property
    def alpha(self) -> complex:
        return complex(np.cos(self.t))

    @property
    def beta(self) -> complex:
        return complex(np.sin(self.t) * np.exp(1j * self.phi))


def minimize_over_rotations(op: np.ndarray, rho: np.ndarray, grid: int = ROTATION_GRID) -> RotationSearch:
    """
    Grid scan followed by a Nelder-Mead polish.

    Args:
        op: Witness operator
        rho: Density matrix being rotated
        grid: Points per axis

    Returns:
        RotationSearch with the best (t, phi) found
    """
    t_axis = np.linspace(0.0, np.pi / 2, grid)
    phi_axis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    tt, pp = np.meshgrid(t_axis, phi_axis, indexing="ij")
    values = batch_rotated_expectations(op, rho, tt.ravel(), pp.ravel())
    best = int(np.argmin(values))
    t0, phi0 = float(tt.ravel()[best]), float(pp.ravel()[best])
    grid_min, grid_max = float(values[best]), float(np.max(values))

    def objective(x: np.ndarray) -> float:
        return float(batch_rotated_expectations(op, rho, [x[0]], [x[1]])[0])

    res = minimize(
        objective,
        x0=np.array([t0, phi0]),
        method="Nelder-Mead",
        options={"xatol": NELDER_MEAD_TOL, "fatol": NELDER_MEAD_TOL},
    )
    if res.fun < grid_min:
        t_best, phi_best, value = float(res.x[0]), float(res.x[1]) % (2 * np.pi), float(res.fun)
    else:
        t_best, phi_best, value = t0, phi0, grid_min

    logger.debug(f"Rotation search: grid min {grid_min:.12f}, polished {value:.12f}")
    return RotationSearch(t_best, phi_best, value, grid_min, grid_max)
