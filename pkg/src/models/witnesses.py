"""
Tripartite entanglement witnesses and the verdict for a density matrix.

Families:
- spin chain with free constant: c0 I + P12 + P23
- spin chain with all pair products: a0 I + a12 P12 + a13 P13 + a23 P23
- GHZ projector witness built from singlet, W and GHZ-type projectors
- stabilizer witness: b0 I + b1 S1 + b2 S2 + b12 S12

P_ij denotes sigma(i).sigma(j). Traces against rho3 use (a, b, c).
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..config import (
    DETECTION_THRESHOLD,
    GHZ_PROJECTOR_BOUND,
    GHZ_STABILIZER_BOUND,
    PSD_SLACK,
    REFINE_ITERATIONS,
    SPIN_CHAIN_BOUND,
    SQRT2,
    W_GEN_CONSTANT,
)
from ..linalg import SX, SY, SZ, expectation, hermitian_eigs, kron_all, partial_transpose, projector
from .nifg import (
    InvalidCoefficientsError,
    NifgCoefficients,
    build_rho3,
    ppt_condition,
    validity,
)
from .rotations import check_pair, su2_block
from .states import (
    ghz_plus,
    refine_maximum,
    singlet_projector,
    spin_product,
    w_basis_states,
    w_class_exhibit,
)

logger = logging.getLogger(__name__)

IDENTITY = np.eye(8, dtype=np.complex128)


class WitnessFamily(Enum):
    SPIN_CHAIN_GEN = "spin-chain-gen"
    SPIN_CHAIN = "spin-chain"
    GHZ_PROJECTOR = "ghz-projector"
    STABILIZER = "stabilizer"

    @property
    def n_params(self) -> int:
        return {"spin-chain-gen": 1, "spin-chain": 4, "ghz-projector": 5, "stabilizer": 4}[self.value]


class ClassTarget(Enum):
    W_EW = "w"
    GHZ_EW = "ghz"


class DetectedClass(Enum):
    NONE = "none"
    W_MINUS_B = "W\\B"
    GHZ_MINUS_W_CANDIDATE = "GHZ\\W-candidate"


# ---------------------------------------------------------------------------
# Spin-chain witnesses
# ---------------------------------------------------------------------------

def w_chain(c0: float) -> np.ndarray:
    return c0 * IDENTITY + spin_product(1, 2) + spin_product(2, 3)


def w_gen() -> np.ndarray:
    return w_chain(W_GEN_CONSTANT)


def w_chain_eigenvalues(c0: float) -> List[float]:
    return [c0 + 2.0, c0, c0 - 4.0]


def trace_w_gen(c: NifgCoefficients) -> float:
    return W_GEN_CONSTANT - 3.0 * (c.a + c.c)


def w_spin(a0: float, a12: float, a13: float, a23: float) -> np.ndarray:
    return (
        a0 * IDENTITY
        + a12 * spin_product(1, 2)
        + a13 * spin_product(1, 3)
        + a23 * spin_product(2, 3)
    )


def w_spin_eigenvalues(a0: float, a12: float, a13: float, a23: float) -> List[float]:
    """E1 (quartet) and E2, E3 (doublets)."""
    total = a12 + a13 + a23
    q = a12 ** 2 + a13 ** 2 + a23 ** 2 - a12 * a13 - a12 * a23 - a13 * a23
    root = 2.0 * math.sqrt(max(q, 0.0))
    return [a0 + total, a0 - total + root, a0 - total - root]


def trace_w_spin0(c: NifgCoefficients) -> float:
    return SPIN_CHAIN_BOUND - 3.0 * (c.a + c.b - c.c)


# ---------------------------------------------------------------------------
# GHZ projector witness
# ---------------------------------------------------------------------------

def ghz_projector_ew(a0: float, a1: float, a2: float, a3: float, a4: float) -> np.ndarray:
    w1, w2, psi_minus = w_basis_states()
    singlets = singlet_projector(1, 2) + singlet_projector(1, 3) + singlet_projector(2, 3)
    return (
        a0 * IDENTITY
        + a1 * singlets
        + a2 * projector(w1)
        + a3 * projector(w2)
        + a4 * projector(psi_minus)
    )


def ghz_projector_normalized(params) -> Tuple[float, ...]:
    """Coefficients of the normalized projectors 2*sum(singlets), 3|W1><W1|, 3|W2><W2|, 2|Psi-><Psi-|."""
    a0, a1, a2, a3, a4 = params
    return (a0, a1 / 2.0, a2 / 3.0, a3 / 3.0, a4 / 2.0)


def ghz_projector_eigenvalues(a0: float, a1: float, a2: float, a3: float, a4: float) -> List[float]:
    """a0 on GHZ+, then the quartet, |W1>, |W2> and |Psi-_123> values."""
    return [a0, a0 + 1.5 * a1, a0 + a2, a0 + a3, a0 + a4]


def trace_ghz_projector0(c: NifgCoefficients) -> float:
    return 0.75 + 2.0 * c.eta


# ---------------------------------------------------------------------------
# Stabilizer witnesses
# ---------------------------------------------------------------------------

def stabilizers() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """S1 = XXX, S2 = ZZI and S12 = S1 S2."""
    s1 = kron_all(SX, SX, SX)
    s2 = kron_all(SZ, SZ, np.eye(2, dtype=np.complex128))
    return s1, s2, s1 @ s2


def stab_ew(b0: float, b1: float, b2: float, b12: float) -> np.ndarray:
    s1, s2, s12 = stabilizers()
    return b0 * IDENTITY + b1 * s1 + b2 * s2 + b12 * s12


def stab_eigenvalues(b0: float, b1: float, b2: float, b12: float) -> List[float]:
    return [
        b0 + s1 * b1 + s2 * b2 + s1 * s2 * b12
        for s1 in (1, -1)
        for s2 in (1, -1)
    ]


def stabilizer_sign_operator(i1: int, i2: int, odd: bool = False) -> np.ndarray:
    """(-1)^i1 S1 + (-1)^i2 S2 + (-1)^(i1+i2+odd) S12."""
    s1, s2, s12 = stabilizers()
    return (-1) ** i1 * s1 + (-1) ** i2 * s2 + (-1) ** (i1 + i2 + int(odd)) * s12


def trace_stab(c: NifgCoefficients, b0: float, b1: float, b2: float, b12: float) -> float:
    """Only S2 = ZZI overlaps rho3, with <Z1 Z2> = -a."""
    return b0 - b2 * c.a


# ---------------------------------------------------------------------------
# Specs and canonical witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessSpec:
    family: WitnessFamily
    params: Tuple[float, ...]
    target: ClassTarget = ClassTarget.W_EW
    name: str = ""

    def __post_init__(self):
        params = tuple(float(p) for p in self.params)
        if len(params) != self.family.n_params:
            raise ValueError(
                f"{self.family.value} takes {self.family.n_params} parameters, got {len(params)}"
            )
        object.__setattr__(self, "params", params)

    def operator(self) -> np.ndarray:
        builders = {
            WitnessFamily.SPIN_CHAIN_GEN: w_chain,
            WitnessFamily.SPIN_CHAIN: w_spin,
            WitnessFamily.GHZ_PROJECTOR: ghz_projector_ew,
            WitnessFamily.STABILIZER: stab_ew,
        }
        return builders[self.family](*self.params)

    def eigenvalue_list(self) -> List[float]:
        lists = {
            WitnessFamily.SPIN_CHAIN_GEN: w_chain_eigenvalues,
            WitnessFamily.SPIN_CHAIN: w_spin_eigenvalues,
            WitnessFamily.GHZ_PROJECTOR: ghz_projector_eigenvalues,
            WitnessFamily.STABILIZER: stab_eigenvalues,
        }
        return lists[self.family](*self.params)

    def trace(self, c: NifgCoefficients) -> float:
        """Closed-form Tr(W rho3)."""
        p = self.params
        if self.family is WitnessFamily.SPIN_CHAIN_GEN:
            return p[0] - 3.0 * (c.a + c.c)
        if self.family is WitnessFamily.SPIN_CHAIN:
            return p[0] - 3.0 * (p[1] * c.a + p[2] * c.b + p[3] * c.c)
        if self.family is WitnessFamily.GHZ_PROJECTOR:
            # Tr(Pi_ij rho3) = (1 + 3 p_ij)/4; W1, W2 and Psi-_123 all give eta
            return p[0] + p[1] * (3.0 + 3.0 * (c.a + c.b + c.c)) / 4.0 + (p[2] + p[3] + p[4]) * c.eta
        return trace_stab(c, *p)


W_GEN = WitnessSpec(WitnessFamily.SPIN_CHAIN_GEN, (W_GEN_CONSTANT,), ClassTarget.W_EW, "w_gen")
W_SPIN0 = WitnessSpec(WitnessFamily.SPIN_CHAIN, (SPIN_CHAIN_BOUND, 1.0, 1.0, -1.0), ClassTarget.W_EW, "w_spin0")
GHZ_PROJECTOR0 = WitnessSpec(
    WitnessFamily.GHZ_PROJECTOR,
    (GHZ_PROJECTOR_BOUND, -2.0, -3.0, -3.0, -4.0),
    ClassTarget.GHZ_EW,
    "ghz_projector0",
)
STAB_W0 = WitnessSpec(WitnessFamily.STABILIZER, (SQRT2, 1.0, 1.0, -1.0), ClassTarget.W_EW, "stab_w0")
STAB_GHZ0 = WitnessSpec(
    WitnessFamily.STABILIZER, (GHZ_STABILIZER_BOUND, 1.0, 1.0, -1.0), ClassTarget.GHZ_EW, "stab_ghz0"
)

PANEL: Tuple[WitnessSpec, ...] = (W_GEN, W_SPIN0, STAB_W0, GHZ_PROJECTOR0, STAB_GHZ0)
PANEL_BY_NAME: Dict[str, WitnessSpec] = {spec.name: spec for spec in PANEL}


# ---------------------------------------------------------------------------
# Rotated traces
# ---------------------------------------------------------------------------
#
# rho3 is a combination of singlet projectors, so u x u x u rho3 (u x u x u)^dagger
# equals rho3 for every u in SU(2) and the rotated traces reduce to the plain ones.

def rotated_trace_w_gen(c: NifgCoefficients, alpha: complex, beta: complex) -> float:
    check_pair(alpha, beta)
    return trace_w_gen(c)


def rotated_trace_w_spin0(c: NifgCoefficients, alpha: complex, beta: complex) -> float:
    check_pair(alpha, beta)
    return trace_w_spin0(c)


def rotated_trace_ghz0(c: NifgCoefficients, alpha: complex, beta: complex) -> float:
    check_pair(alpha, beta)
    return trace_ghz_projector0(c)


# ---------------------------------------------------------------------------
# Verdict
# ---------------------------------------------------------------------------

@dataclass
class Verdict:
    detected_class: DetectedClass
    witness_value: float
    witness_name: Optional[str]
    ppt_flags: Tuple[bool, bool, bool]
    ppt_entangled: bool
    values: Dict[str, float] = field(default_factory=dict)

    @property
    def detected(self) -> bool:
        return self.detected_class is not DetectedClass.NONE


def panel_values(rho: np.ndarray, panel=PANEL) -> Dict[str, float]:
    return {spec.name: expectation(spec.operator(), rho) for spec in panel}


def _verdict(values: Dict[str, float], ppt_flags: Tuple[bool, bool, bool]) -> Verdict:
    by_target = {
        target: min(
            ((v, n) for n, v in values.items() if PANEL_BY_NAME[n].target is target),
            default=(math.inf, None),
        )
        for target in ClassTarget
    }
    ghz_value, ghz_name = by_target[ClassTarget.GHZ_EW]
    w_value, w_name = by_target[ClassTarget.W_EW]

    if ghz_value < DETECTION_THRESHOLD:
        detected, value, name = DetectedClass.GHZ_MINUS_W_CANDIDATE, ghz_value, ghz_name
    elif w_value < DETECTION_THRESHOLD:
        detected, value, name = DetectedClass.W_MINUS_B, w_value, w_name
    else:
        detected, value, name = DetectedClass.NONE, min(values.values()), None

    return Verdict(
        detected_class=detected,
        witness_value=float(value),
        witness_name=name,
        ppt_flags=ppt_flags,
        ppt_entangled=detected is not DetectedClass.NONE and any(ppt_flags),
        values=values,
    )


def classify_density(rho: np.ndarray) -> Verdict:
    """Verdict for an arbitrary three-qubit density matrix, PPT flags from spectra."""
    flags = tuple(
        hermitian_eigs(partial_transpose(rho, party)).min >= -PSD_SLACK for party in (1, 2, 3)
    )
    return _verdict(panel_values(rho), flags)


def classify(c: NifgCoefficients) -> Verdict:
    """
    Evaluate the witness panel on rho3 and combine with per-party PPT flags.

    Raises:
        InvalidCoefficientsError: the triple is not a density matrix
    """
    check = validity(c)
    if not check.valid:
        raise InvalidCoefficientsError("; ".join(check.failures))
    rho = build_rho3(c)

    s1, s2, s12 = stabilizers()
    combo = expectation(s1 + s2 - s12, rho)
    if abs(combo + c.a) > 1e-12:
        raise AssertionError(f"<S1 + S2 - S12> = {combo:.15f}, expected {-c.a:.15f}")

    flags = tuple(ppt_condition(c, party) for party in (1, 2, 3))
    verdict = _verdict(panel_values(rho), flags)
    logger.debug(f"classify{c.as_tuple()}: {verdict.detected_class.value} ({verdict.witness_value:.6f})")
    return verdict


# ---------------------------------------------------------------------------
# Purity bound and W-class counterexample
# ---------------------------------------------------------------------------

@dataclass
class PurityResult:
    max_value: float  # max over sampled and refined rotations
    sampled_max: float
    uniform_value: float  # <W1|rho3|W1>, unchanged by u x u x u
    lambda_max: float


def _rotated_w1(x: np.ndarray) -> np.ndarray:
    """Per-party SU(2) rotation of |W1> from (t, phi_a, phi_b) angles."""
    x = np.asarray(x, dtype=float)
    x = x.reshape(x.shape[:-1] + (3, 3))
    alpha = np.cos(x[..., 0]) * np.exp(1j * x[..., 1])
    beta = np.sin(x[..., 0]) * np.exp(1j * x[..., 2])
    u = su2_block(alpha, beta)
    w1 = w_basis_states()[0].reshape(2, 2, 2)
    out = np.einsum("...ai,...bj,...ck,ijk->...abc", u[..., 0, :, :], u[..., 1, :, :], u[..., 2, :, :], w1)
    return out.reshape(out.shape[:-3] + (8,))


def purity_bound_check(
    c: NifgCoefficients,
    samples: int,
    seed: int,
    refine_iterations: int = REFINE_ITERATIONS,
) -> PurityResult:
    """Largest overlap of a locally rotated |W1> projector with rho3."""
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    rho = build_rho3(c)
    rng = np.random.default_rng(seed)

    t = np.arcsin(np.sqrt(rng.uniform(0.0, 1.0, (samples, 3))))
    phases = rng.uniform(0.0, 2 * np.pi, (samples, 3, 2))
    x = np.concatenate([t[..., None], phases], axis=-1).reshape(samples, 9)

    psi = _rotated_w1(x)
    values = np.einsum("ni,ij,nj->n", psi.conj(), rho, psi).real
    idx = int(np.argmax(values))
    sampled = float(values[idx])

    def objective(vec: np.ndarray) -> float:
        return float(np.vdot(vec, rho @ vec).real)

    _, refined = refine_maximum(objective, _rotated_w1, x[idx], iterations=refine_iterations)
    w1 = w_basis_states()[0]
    result = PurityResult(
        max_value=max(sampled, refined),
        sampled_max=sampled,
        uniform_value=objective(w1),
        lambda_max=hermitian_eigs(rho).max,
    )
    logger.info(f"Purity check: max overlap {result.max_value:.9f} (lambda_max {result.lambda_max:.9f})")
    return result


def w_chain_counterexample(c0: float) -> float:
    """<W1(c0)> on the W-class eigenvector of P12 + P23 with eigenvalue -4."""
    _, _, state = w_class_exhibit()
    return expectation(w_chain(c0), state.density())


def ghz_fidelity(state: np.ndarray) -> float:
    """|<GHZ+|psi>|^2."""
    return float(abs(np.vdot(ghz_plus(), state)) ** 2)
