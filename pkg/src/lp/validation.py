"""
Witness validation against derived constraints, and empirical checks of the
bounds that define the feasible regions.
"""
import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Optional

import numpy as np

from ..config import (
    BOUND_SLACK,
    DEFAULT_SAMPLES,
    DETECTION_THRESHOLD,
    GHZ_PROJECTOR_BOUND,
    GHZ_STABILIZER_BOUND,
    REFINE_ITERATIONS,
    SPIN_CHAIN_BOUND,
    STABILIZER_B_BOUND,
    W_GEN_CONSTANT,
)
from ..linalg import hermitian_eigs, pure_expectation
from ..models.states import (
    SPLITS,
    biseparable_state,
    best_sample,
    draw_biseparable_vectors,
    draw_w_vectors,
    refine_maximum,
    spin_product,
    w_state,
)
from ..models.witnesses import (
    WitnessFamily,
    WitnessSpec,
    ghz_projector_ew,
    ghz_projector_normalized,
    stabilizer_sign_operator,
)
from .constraints import ConstraintRow, derived_constraints, region_for
from .polytope import UnknownSystemError

logger = logging.getLogger(__name__)

CERTIFY_TOL = 1e-7


@dataclass
class RowCheck:
    tag: str
    value: float
    passed: bool


@dataclass
class ValidationReport:
    """Outcome of the three witness checks."""
    name: str
    rows: List[RowCheck] = field(default_factory=list)
    lp_minimum: float = float("nan")
    certified: Optional[bool] = None  # simplex minimum matches the vertex minimum
    eigenvalues: List[float] = field(default_factory=list)
    has_negative_eigenvalue: bool = False
    a0_rule: bool = True  # GHZ projector: the negative eigenvalue is not a0 itself

    @property
    def rows_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.rows_passed and self.has_negative_eigenvalue and self.a0_rule

    @property
    def failed_rows(self) -> List[str]:
        return [r.tag for r in self.rows if not r.passed]


def region_params(spec: WitnessSpec) -> np.ndarray:
    """Witness parameters in the coordinates of its feasible region."""
    if spec.family is WitnessFamily.GHZ_PROJECTOR:
        return np.array(ghz_projector_normalized(spec.params))
    return np.array(spec.params)


def _lp_minimum(spec: WitnessSpec, params: np.ndarray, rows: List[ConstraintRow]):
    vertex_min = min(row.value(params) for row in rows)
    if spec.family is WitnessFamily.SPIN_CHAIN_GEN:
        return vertex_min, True
    region = region_for(spec.family, spec.target)
    value = params[0] + region.minimize(params[1:])
    certified = abs(value - vertex_min) <= CERTIFY_TOL * max(1.0, abs(vertex_min))
    if not certified:
        logger.warning(f"{spec.name or spec.family.value}: simplex {value:.12f} vs vertices {vertex_min:.12f}")
    return value, certified


def validate_witness(spec: WitnessSpec) -> ValidationReport:
    """
    Check a witness against its target class.

    Args:
        spec: Witness family, parameters and target

    Returns:
        ValidationReport with per-row results, the LP minimum and the
        eigenvalue gate

    Raises:
        UnknownSystemError: the family has no region for the target
    """
    params = region_params(spec)
    rows = derived_constraints(spec.family, spec.target)
    report = ValidationReport(name=spec.name or spec.family.value)

    for row in rows:
        v = row.value(params)
        report.rows.append(RowCheck(row.tag, v, row.satisfied(params)))
    report.lp_minimum, report.certified = _lp_minimum(spec, params, rows)

    eigenvalues = spec.eigenvalue_list()
    report.eigenvalues = [float(e) for e in eigenvalues]
    negative = [e < DETECTION_THRESHOLD for e in eigenvalues]
    report.has_negative_eigenvalue = any(negative)
    if spec.family is WitnessFamily.GHZ_PROJECTOR:
        report.a0_rule = any(negative[1:])

    logger.info(
        f"Validated {report.name}: rows {'ok' if report.rows_passed else report.failed_rows}, "
        f"LP min {report.lp_minimum:.9f}, negative eigenvalue {report.has_negative_eigenvalue}"
    )
    return report


# ---------------------------------------------------------------------------
# Bound verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Combo:
    """Operator whose maximum over a state class is claimed to be `claimed`."""
    name: str
    build: Callable[[], np.ndarray] = field(repr=False)
    claimed: float
    note: str = ""


def _spin_face(plus: int) -> np.ndarray:
    pairs = {12: (1, 2), 13: (1, 3), 23: (2, 3)}
    total = np.zeros((8, 8), dtype=np.complex128)
    for key, pair in pairs.items():
        total += (1.0 if key == plus else -1.0) * spin_product(*pair)
    return total


def _build_combos() -> Dict[str, Combo]:
    combos = {}
    for plus in (12, 13, 23):
        name = f"spin-chain-{plus}"
        combos[name] = Combo(name, partial(_spin_face, plus), SPIN_CHAIN_BOUND, "biseparable")
    for i1 in (0, 1):
        for i2 in (0, 1):
            name = f"stab-even-{i1}{i2}"
            combos[name] = Combo(name, partial(stabilizer_sign_operator, i1, i2), STABILIZER_B_BOUND, "1|23 split")
            name = f"stab-odd-{i1}{i2}"
            combos[name] = Combo(name, partial(stabilizer_sign_operator, i1, i2, True), 1.0, "separable")
            name = f"stab-ghz-even-{i1}{i2}"
            combos[name] = Combo(name, partial(stabilizer_sign_operator, i1, i2), GHZ_STABILIZER_BOUND, "W class")
    combos["ghz-projector-face"] = Combo(
        "ghz-projector-face", partial(ghz_projector_ew, 0.0, 2.0, 3.0, 3.0, 4.0), GHZ_PROJECTOR_BOUND, "W class"
    )
    combos["w-gen-pair"] = Combo(
        "w-gen-pair", lambda: -(spin_product(1, 2) + spin_product(2, 3)), W_GEN_CONSTANT, "biseparable"
    )
    return combos


COMBOS: Dict[str, Combo] = _build_combos()
FAMILIES = ("B", "W", "all")


@dataclass
class BoundReport:
    combo: str
    family: str
    empirical_max: float
    spectral_max: float
    claimed: float
    gap: float  # claimed - empirical_max
    verdict: str  # "violated" or "consistent"
    vector: Optional[np.ndarray] = field(default=None, repr=False)


def get_combo(name: str) -> Combo:
    try:
        return COMBOS[name]
    except KeyError:
        raise UnknownSystemError(f"Unknown combo '{name}', choose from {sorted(COMBOS)}")


def _sampled_max(op: np.ndarray, family: str, samples: int, rng: np.random.Generator, refine_iterations: int):
    def batch(psi: np.ndarray) -> np.ndarray:
        return pure_expectation(op, psi)

    def single(psi: np.ndarray) -> float:
        return float(pure_expectation(op, psi))

    if family == "B":
        builders = [partial(biseparable_state, split) for split in SPLITS]
        per_split = max(1, samples // len(builders))
        candidates = [(b,) + best_sample(batch, b, draw_biseparable_vectors(rng, per_split)) for b in builders]
    else:
        candidates = [(w_state,) + best_sample(batch, w_state, draw_w_vectors(rng, samples))]

    builder, x0, sampled = max(candidates, key=lambda t: t[2])
    x, refined = refine_maximum(single, builder, x0, iterations=refine_iterations)
    logger.debug(f"Sampled max {sampled:.9f}, refined {refined:.9f}")
    return max(sampled, refined), x


def verify_bound(
    combo: str,
    family: str = "B",
    claimed: Optional[float] = None,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    refine_iterations: int = REFINE_ITERATIONS,
) -> BoundReport:
    """
    Largest expectation of a combo operator over a state class.

    Args:
        combo: Name in COMBOS
        family: "B" (biseparable), "W" (W class) or "all"
        claimed: Bound to test; defaults to the combo's quoted bound
        samples: Pure extreme points drawn before refinement
        seed: Seed for numpy's default_rng
        refine_iterations: Golden-section sweeps from the best sample

    Returns:
        BoundReport; the verdict is "violated" when the maximum exceeds
        claimed + BOUND_SLACK
    """
    if family not in FAMILIES:
        raise ValueError(f"Unknown family '{family}', choose from {FAMILIES}")
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    spec = get_combo(combo)
    op = spec.build()
    claimed = spec.claimed if claimed is None else float(claimed)
    spectral = hermitian_eigs(op).max

    vector = None
    if family == "all":
        empirical = spectral
    else:
        rng = np.random.default_rng(seed)
        empirical, vector = _sampled_max(op, family, samples, rng, refine_iterations)

    verdict = "violated" if empirical > claimed + BOUND_SLACK else "consistent"
    logger.info(f"{combo} over {family}: max {empirical:.9f} vs claimed {claimed:.9f} -> {verdict}")
    return BoundReport(combo, family, empirical, spectral, claimed, claimed - empirical, verdict, vector)
