"""
Parametric constraint tables for the witness families.

A row reads  offset + coefficients . params >= 0.  The quoted tables are kept
as audit data; validation works from rows derived from region vertices.
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

import numpy as np

from ..config import GHZ_STABILIZER_BOUND, SPIN_CHAIN_BOUND, SQRT2, W_GEN_CONSTANT
from ..models.witnesses import ClassTarget, WitnessFamily
from .polytope import (
    Polytope,
    UnknownSystemError,
    ghz_projector_region,
    spin_chain_region,
    stabilizer_b_region,
    stabilizer_w_region,
)

logger = logging.getLogger(__name__)

# Smallest constant for which the two-pair chain stays nonnegative on the target class
GHZ_CHAIN_CONSTANT = 4.0
STAB_GHZ_MIXED = 0.99  # quoted two-decimal literal paired with 2.98


@dataclass(frozen=True)
class ConstraintRow:
    coefficients: Tuple[float, ...]
    tag: str = ""
    flag: str = ""  # non-empty when the quoted row was corrected
    offset: float = 0.0

    def value(self, params) -> float:
        return self.offset + float(np.dot(self.coefficients, np.asarray(params, dtype=float)))

    def satisfied(self, params, tol: float = 1e-9) -> bool:
        return self.value(params) >= -tol

    def as_halfspace(self) -> Tuple[np.ndarray, float]:
        """(a, b) with a . params <= b."""
        return -np.asarray(self.coefficients, dtype=float), self.offset


def _rows(coeffs, prefix: str) -> List[ConstraintRow]:
    return [ConstraintRow(tuple(float(x) for x in c), f"{prefix}-{i + 1}") for i, c in enumerate(coeffs)]


# ---------------------------------------------------------------------------
# Quoted tables
# ---------------------------------------------------------------------------

def _spin_chain_table() -> List[ConstraintRow]:
    r = 3.0 - (SPIN_CHAIN_BOUND - 1.0)
    q = -5.0 + (SPIN_CHAIN_BOUND - 1.0)
    return _rows([
        (1, r, -3, 1), (1, -3, r, 1), (1, -3, -3, q),
        (1, r, 1, -3), (1, -3, 1, r), (1, -3, q, -3),
        (1, 1, -3, r), (1, 1, r, -3), (1, q, -3, -3),
        (1, 1, 1, 1), (1, 1, 1, -3), (1, -3, 1, 1),
        (1, 1, -3, 1), (1, -3, -3, -3),
    ], "spin-chain")


def _ghz_projector_table() -> List[ConstraintRow]:
    """Rows in projector-normalized parameters (a0, a1/2, a2/3, a3/3, a4/2)."""
    rows = _rows([
        (1, 0, 0, 0, 0), (1, 3, 0, 0, 0), (1, 0, 3, 0, 0), (1, 0, 0, 3, 0),
        (1, 0, 0, 0, 15 / 8),
        (1, 3, 0, 0, 3 / 8), (1, 0, 3, 0, 3 / 8), (1, 0, 0, 3, 3 / 8),
        (1, 3, 3 / 4, 0, 0), (1, 3, 0, 3 / 4, 0), (1, 0, 3, 3 / 4, 0),
        (1, 3 / 4, 3, 0, 0), (1, 3 / 4, 0, 3, 0), (1, 0, 3 / 4, 3, 0),
    ], "ghz-projector")
    rows[8] = ConstraintRow(rows[8].coefficients, rows[8].tag, "printed without the /4 on a2")
    return rows


def _stabilizer_table(big: float, small: float, prefix: str) -> List[ConstraintRow]:
    """Four cluster rows, four plain rows and twelve mixed rows."""
    g, d = big, small
    return _rows([
        (1, g, g, -g), (1, g, -g, g), (1, -g, g, g), (1, -g, -g, -g),
        (1, 1, -1, -1), (1, -1, -1, 1), (1, -1, 1, -1), (1, 1, 1, 1),
        (1, g, -d, d), (1, g, d, -d),
        (1, d, g, -d), (1, -d, g, d),
        (1, d, -d, g), (1, -d, d, g),
        (1, -d, -d, -g), (1, d, d, -g),
        (1, -d, -g, -d), (1, d, -g, d),
        (1, -g, -d, -d), (1, -g, d, d),
    ], prefix)


def _stabilizer_w_table() -> List[ConstraintRow]:
    h = (1.0 - SQRT2) / 2.0
    s = SQRT2
    rows = _rows([
        (1, s, s, -s), (1, s, -s, s), (1, -s, s, s), (1, -s, -s, -s),
        (1, 1, -1, -1), (1, -1, -1, 1), (1, -1, 1, -1), (1, 1, 1, 1),
        (1, s, h, -h), (1, s, -h, h),
        (1, -h, s, h), (1, h, s, -h),
        (1, -h, h, s), (1, h, -h, s),
        (1, h, h, -s), (1, -h, -h, -s),
        (1, h, -s, h), (1, -h, -s, -h),
        (1, -s, h, h), (1, -s, -h, -h),
    ], "stabilizer-w")
    rows[13] = ConstraintRow(rows[13].coefficients, rows[13].tag, "printed as a copy of the previous row; restored by symmetry")
    return rows


def _spin_chain_gen_table(target: ClassTarget) -> List[ConstraintRow]:
    constant = W_GEN_CONSTANT if target is ClassTarget.W_EW else GHZ_CHAIN_CONSTANT
    return [ConstraintRow((1.0,), f"spin-chain-gen-{target.value}", offset=-constant)]


def constraint_set(family: WitnessFamily, target: ClassTarget) -> List[ConstraintRow]:
    """
    Quoted inequality table for a (family, target) pair.

    Raises:
        UnknownSystemError: no table exists for the pair
    """
    if family is WitnessFamily.SPIN_CHAIN_GEN:
        return _spin_chain_gen_table(target)
    if family is WitnessFamily.SPIN_CHAIN and target is ClassTarget.W_EW:
        return _spin_chain_table()
    if family is WitnessFamily.GHZ_PROJECTOR and target is ClassTarget.GHZ_EW:
        return _ghz_projector_table()
    if family is WitnessFamily.STABILIZER and target is ClassTarget.W_EW:
        return _stabilizer_w_table()
    if family is WitnessFamily.STABILIZER and target is ClassTarget.GHZ_EW:
        return _stabilizer_table(GHZ_STABILIZER_BOUND, STAB_GHZ_MIXED, "stabilizer-ghz")
    raise UnknownSystemError(f"No constraint table for {family.value} as a {target.value} witness")


# ---------------------------------------------------------------------------
# Rows derived from region vertices
# ---------------------------------------------------------------------------

def region_for(family: WitnessFamily, target: ClassTarget) -> Polytope:
    """Region of expectation values over which the witness must stay nonnegative."""
    if family is WitnessFamily.SPIN_CHAIN and target is ClassTarget.W_EW:
        return spin_chain_region()
    if family is WitnessFamily.GHZ_PROJECTOR and target is ClassTarget.GHZ_EW:
        return ghz_projector_region()
    if family is WitnessFamily.STABILIZER:
        return stabilizer_b_region() if target is ClassTarget.W_EW else stabilizer_w_region()
    raise UnknownSystemError(f"No feasible region for {family.value} as a {target.value} witness")


def derived_constraints(family: WitnessFamily, target: ClassTarget) -> List[ConstraintRow]:
    """One row (1, v) per vertex v of the region; the c0 family keeps its single row."""
    if family is WitnessFamily.SPIN_CHAIN_GEN:
        return _spin_chain_gen_table(target)
    region = region_for(family, target)
    rows = [
        ConstraintRow((1.0,) + tuple(float(x) for x in v), f"{region.name}-vertex-{i + 1}")
        for i, v in enumerate(region.vertices)
    ]
    logger.debug(f"Derived {len(rows)} rows for {family.value}/{target.value}")
    return rows


# ---------------------------------------------------------------------------
# Audit files
# ---------------------------------------------------------------------------

def dump_constraints(rows: List[ConstraintRow], path) -> Path:
    """Write rows as tab-separated text: tag, flag, offset, coefficients."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    width = max((len(r.coefficients) for r in rows), default=0)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, delimiter="\t")
        writer.writerow(["tag", "flag", "offset"] + [f"c{k}" for k in range(width)])
        for row in rows:
            writer.writerow([row.tag, row.flag, repr(row.offset)] + [repr(x) for x in row.coefficients])
    logger.info(f"Wrote {len(rows)} constraint rows to {path}")
    return path


def load_constraints(path) -> List[ConstraintRow]:
    rows = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f, delimiter="\t")
        next(reader, None)
        for record in reader:
            if not record:
                continue
            tag, flag, offset, *coeffs = record
            rows.append(ConstraintRow(tuple(float(x) for x in coeffs if x != ""), tag, flag, float(offset)))
    return rows
