"""
Halfspace polytopes, vertex enumeration and the feasible regions of the
witness programs.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..config import (
    FEASIBILITY_TOL,
    GHZ_PROJECTOR_BOUND,
    GHZ_STABILIZER_BOUND,
    SPIN_CHAIN_BOUND,
    STABILIZER_B_BOUND,
    VERTEX_DEDUP_TOL,
)
from .simplex import InfeasibleError, LinearProgram, UnboundedError, simplex_minimize

logger = logging.getLogger(__name__)


class UnknownSystemError(ValueError):
    pass


def check_bounded(A: np.ndarray, b: np.ndarray) -> None:
    """Raise UnboundedError unless every coordinate is bounded both ways."""
    n = A.shape[1]
    for k in range(n):
        for direction in (1.0, -1.0):
            objective = np.zeros(n)
            objective[k] = direction
            try:
                simplex_minimize(LinearProgram(objective, A, b))
            except UnboundedError:
                raise UnboundedError(f"Region unbounded along {'-' if direction > 0 else '+'}x{k}")


def enumerate_vertices(A, b, tol: float = VERTEX_DEDUP_TOL) -> np.ndarray:
    """
    Vertices of {x : A x <= b} by active-set enumeration.

    Args:
        A: (m, n) halfspace normals
        b: (m,) offsets
        tol: Points closer than this are merged

    Returns:
        (k, n) array of vertices in discovery order
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    check_bounded(A, b)

    vertices: List[np.ndarray] = []
    for active in itertools.combinations(range(m), n):
        sub = A[list(active)]
        if np.linalg.matrix_rank(sub) < n:
            continue
        x = np.linalg.solve(sub, b[list(active)])
        if np.any(A @ x > b + FEASIBILITY_TOL):
            continue
        if any(np.max(np.abs(x - v)) < tol for v in vertices):
            continue
        vertices.append(x)

    logger.debug(f"Enumerated {len(vertices)} vertices from {m} halfspaces in {n}d")
    return np.array(vertices).reshape(-1, n)


@dataclass
class Polytope:
    """Bounded polytope A x <= b; vertices computed on first use."""
    A: np.ndarray
    b: np.ndarray
    name: str = ""
    labels: List[str] = field(default_factory=list)
    _vertices: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)

    @property
    def dim(self) -> int:
        return self.A.shape[1]

    @property
    def vertices(self) -> np.ndarray:
        if self._vertices is None:
            self._vertices = enumerate_vertices(self.A, self.b)
        return self._vertices

    def contains(self, x, tol: float = FEASIBILITY_TOL) -> bool:
        return bool(np.all(self.A @ np.asarray(x, dtype=float) <= self.b + tol))

    def hull_contains(self, x) -> bool:
        """Membership in the convex hull of the vertices via a feasibility LP."""
        V = self.vertices
        k = V.shape[0]
        x = np.asarray(x, dtype=float)
        # lambda >= 0, sum lambda = 1, V^T lambda = x
        eq = np.vstack([V.T, np.ones((1, k))])
        rhs = np.concatenate([x, [1.0]])
        A = np.vstack([eq, -eq, -np.eye(k)])
        b = np.concatenate([rhs + FEASIBILITY_TOL, -rhs + FEASIBILITY_TOL, np.zeros(k)])
        try:
            simplex_minimize(LinearProgram(np.zeros(k), A, b))
        except InfeasibleError:
            return False
        return True

    def minimize(self, objective) -> float:
        """Minimum of objective.x over the region, by simplex."""
        return simplex_minimize(LinearProgram(objective, self.A, self.b)).value

    @classmethod
    def from_box(cls, intervals, name: str = "") -> "Polytope":
        intervals = np.asarray(intervals, dtype=float)
        n = intervals.shape[0]
        A = np.vstack([np.eye(n), -np.eye(n)])
        b = np.concatenate([intervals[:, 1], -intervals[:, 0]])
        return cls(A, b, name=name)


# ---------------------------------------------------------------------------
# Feasible regions of the witness programs
# ---------------------------------------------------------------------------

def spin_chain_region() -> Polytope:
    """(P12, P13, P23) reachable by biseparable states: -3 <= P <= 1 and three slanted faces."""
    box = Polytope.from_box([[-3.0, 1.0]] * 3)
    faces = np.array([
        [-1.0, -1.0, 1.0],
        [-1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0],
    ])
    A = np.vstack([box.A, faces])
    b = np.concatenate([box.b, [SPIN_CHAIN_BOUND] * 3])
    return Polytope(A, b, name="spin-chain", labels=["P12", "P13", "P23"])


def ghz_projector_region() -> Polytope:
    """Normalized projector expectations reachable by W-class states."""
    box = Polytope.from_box([[0.0, 3.0]] * 3 + [[0.0, 2.0]])
    weights = np.array([1.0, 1.0, 1.0, 2.0])
    A = np.vstack([box.A, weights, -weights])
    b = np.concatenate([box.b, [GHZ_PROJECTOR_BOUND, 0.0]])
    return Polytope(A, b, name="ghz-projector", labels=["P1", "P2", "P3", "P4"])


def _stabilizer_region(even_bound: float, name: str) -> Polytope:
    rows, offsets = [], []
    for i1, i2 in itertools.product((0, 1), repeat=2):
        s1, s2 = (-1) ** i1, (-1) ** i2
        rows.append([s1, s2, s1 * s2])
        offsets.append(even_bound)
        rows.append([s1, s2, -s1 * s2])
        offsets.append(1.0)
    return Polytope(np.array(rows, dtype=float), np.array(offsets), name=name, labels=["S1", "S2", "S12"])


def stabilizer_b_region() -> Polytope:
    return _stabilizer_region(STABILIZER_B_BOUND, "stabilizer-b")


def stabilizer_w_region() -> Polytope:
    return _stabilizer_region(GHZ_STABILIZER_BOUND, "stabilizer-w")


SYSTEMS = {
    "spin-chain": spin_chain_region,
    "ghz-projector": ghz_projector_region,
    "stabilizer-b": stabilizer_b_region,
    "stabilizer-w": stabilizer_w_region,
}


def feasible_region(system: str) -> Polytope:
    try:
        return SYSTEMS[system]()
    except KeyError:
        raise UnknownSystemError(f"Unknown system '{system}', choose from {sorted(SYSTEMS)}")


def published_vertices() -> Dict[str, np.ndarray]:
    """Vertex lists quoted for the spin-chain and GHZ-projector regions."""
    s8 = SPIN_CHAIN_BOUND - 1.0
    ghz = [
        (0, 0, 0, 0), (3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0),
        (0, 0, 0, 15 / 8), (3, 3 / 4, 0, 0), (3, 0, 3 / 4, 0), (3, 0, 0, 3 / 8),
        (3 / 4, 3, 0, 0), (0, 3, 3 / 4, 0), (0, 3, 0, 3 / 8),
        (3 / 4, 0, 3, 0), (0, 3 / 4, 3, 0), (0, 0, 3, 3 / 8),
    ]
    spin = [
        (1, 1, 1), (1, 1, -3), (1, -3, 1), (-3, 1, 1), (-3, -3, -3),
        (3 - s8, -3, 1), (-3, 3 - s8, 1), (1, -3, 3 - s8),
        (1, 3 - s8, -3), (-3, 1, 3 - s8), (3 - s8, 1, -3),
        (s8 - 5, -3, -3), (-3, s8 - 5, -3), (-3, -3, s8 - 5),
    ]
    return {
        "ghz-projector": np.array(ghz, dtype=float),
        "spin-chain": np.array(spin, dtype=float),
    }
