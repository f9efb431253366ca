"""
Dense two-phase tableau simplex with Bland's rule.

Solves   minimize c.x   subject to   A x <= b,   x free,
by splitting x = u - v with u, v >= 0 and adding one slack per row.
Rows with negative right-hand side get an artificial variable for phase one.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..config import FEASIBILITY_TOL, MAX_PIVOTS, PIVOT_TOL

logger = logging.getLogger(__name__)


class UnboundedError(Exception):
    """Objective or feasible region is unbounded."""
    pass


class InfeasibleError(Exception):
    """The constraints admit no point."""
    pass


@dataclass
class LinearProgram:
    """minimize objective.x subject to halfspaces A x <= b and optional bounds."""
    objective: np.ndarray
    A: np.ndarray
    b: np.ndarray
    bounds: Optional[Sequence[Tuple[Optional[float], Optional[float]]]] = None

    def __post_init__(self):
        self.objective = np.asarray(self.objective, dtype=float).reshape(-1)
        self.A = np.asarray(self.A, dtype=float).reshape(-1, self.objective.size)
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        if self.A.shape[0] != self.b.size:
            raise ValueError(f"{self.A.shape[0]} rows but {self.b.size} offsets")
        if self.bounds is not None and len(self.bounds) != self.dim:
            raise ValueError(f"{len(self.bounds)} bounds for {self.dim} variables")

    @property
    def dim(self) -> int:
        return self.objective.size

    def rows(self) -> Tuple[np.ndarray, np.ndarray]:
        """Halfspaces with bounds folded in as extra rows."""
        A, b = [self.A], [self.b]
        for k, (lo, hi) in enumerate(self.bounds or []):
            e = np.zeros(self.dim)
            e[k] = 1.0
            if hi is not None:
                A.append(e[None, :])
                b.append(np.array([hi]))
            if lo is not None:
                A.append(-e[None, :])
                b.append(np.array([-lo]))
        return np.vstack(A), np.concatenate(b)


@dataclass
class LPSolution:
    point: np.ndarray
    value: float
    iterations: int
    certified: Optional[bool] = None  # agreement with the vertex minimum, when checked
    basis: List[int] = field(default_factory=list)


class _Tableau:
    """Simplex tableau; last row holds reduced costs and -z."""

    def __init__(self, T: np.ndarray, basis: List[int]):
        self.T = T
        self.basis = basis
        self.pivots = 0

    @property
    def m(self) -> int:
        return self.T.shape[0] - 1

    def pivot(self, row: int, col: int) -> None:
        T = self.T
        T[row] /= T[row, col]
        for r in range(T.shape[0]):
            if r != row and T[r, col] != 0.0:
                T[r] -= T[r, col] * T[row]
        self.basis[row] = col
        self.pivots += 1

    def run(self, n_cols: int) -> None:
        """Pivot until no reduced cost among the first n_cols is negative."""
        while True:
            if self.pivots > MAX_PIVOTS:
                raise RuntimeError(f"Simplex exceeded {MAX_PIVOTS} pivots")
            costs = self.T[-1, :n_cols]
            entering = np.nonzero(costs < -PIVOT_TOL)[0]
            if entering.size == 0:
                return
            col = int(entering[0])  # Bland: lowest index

            column = self.T[:-1, col]
            rhs = self.T[:-1, -1]
            candidates = np.nonzero(column > PIVOT_TOL)[0]
            if candidates.size == 0:
                raise UnboundedError(f"Column {col} has no positive entry")
            ratios = rhs[candidates] / column[candidates]
            best = ratios.min()
            ties = candidates[ratios <= best + PIVOT_TOL]
            row = int(min(ties, key=lambda r: self.basis[r]))  # Bland: lowest basic index
            self.pivot(row, col)


def simplex_minimize(lp: LinearProgram) -> LPSolution:
    """
    Minimize a linear program over free variables.

    Raises:
        InfeasibleError: phase one ends with positive artificial sum
        UnboundedError: an entering column has no positive entry
    """
    A, b = lp.rows()
    m, n = A.shape
    n_struct = 2 * n + m

    sign = np.where(b < 0, -1.0, 1.0)
    needs_art = np.nonzero(b < 0)[0]
    k = needs_art.size

    T = np.zeros((m + 1, n_struct + k + 1))
    T[:m, :n] = A * sign[:, None]
    T[:m, n:2 * n] = -A * sign[:, None]
    T[:m, 2 * n:n_struct] = np.diag(sign)
    T[:m, -1] = b * sign
    basis = [2 * n + i for i in range(m)]
    for j, i in enumerate(needs_art):
        T[i, n_struct + j] = 1.0
        basis[i] = n_struct + j

    tab = _Tableau(T, basis)

    # Phase one: minimize the artificial sum
    if k:
        T[-1, n_struct:n_struct + k] = 1.0
        for i in needs_art:
            T[-1] -= T[i]
        tab.run(n_struct + k)
        if -T[-1, -1] > FEASIBILITY_TOL:
            raise InfeasibleError(f"Phase one residual {-T[-1, -1]:.3e}")

        # drive remaining artificials out of the basis
        for i in range(m):
            if tab.basis[i] >= n_struct:
                nonzero = np.nonzero(np.abs(T[i, :n_struct]) > PIVOT_TOL)[0]
                if nonzero.size:
                    tab.pivot(i, int(nonzero[0]))
        keep = [i for i in range(m) if tab.basis[i] < n_struct]
        T = np.vstack([T[keep], T[-1:]])
        T = np.hstack([T[:, :n_struct], T[:, -1:]])
        tab = _Tableau(T, [tab.basis[i] for i in keep])
        tab.pivots = 0

    # Phase two
    cost = np.concatenate([lp.objective, -lp.objective, np.zeros(m)])
    T = tab.T
    T[-1, :] = 0.0
    T[-1, :n_struct] = cost
    for i, col in enumerate(tab.basis):
        if cost[col] != 0.0:
            T[-1] -= cost[col] * T[i]
    tab.run(n_struct)

    solution = np.zeros(n_struct)
    for i, col in enumerate(tab.basis):
        solution[col] = T[i, -1]
    point = solution[:n] - solution[n:2 * n]
    value = float(lp.objective @ point)
    logger.debug(f"Simplex optimum {value:.12f} after {tab.pivots} pivots")
    return LPSolution(point=point, value=value, iterations=tab.pivots, basis=list(tab.basis))


def is_feasible(A: np.ndarray, b: np.ndarray) -> bool:
    """Whether {x : A x <= b} is nonempty."""
    lp = LinearProgram(np.zeros(np.asarray(A).shape[1]), A, b)
    try:
        simplex_minimize(lp)
    except InfeasibleError:
        return False
    return True
