"""
Three-qubit pure states, W/GHZ orbits and state samplers.

Local amplitude map (per party):
    |0> -> alpha|0> + beta|1>
    |1> -> conj(beta)|0> - conj(alpha)|1>

Samplers draw parameter vectors so that refinement can continue from the
best sample with the same builder.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..config import MIXTURE_TERMS, NORM_TOL, REFINE_ITERATIONS
from ..linalg import PAULIS, embed_pair, projector

logger = logging.getLogger(__name__)

SQRT_HALF = np.sqrt(0.5)

# Parameter vector sizes used by the builders
BISEPARABLE_DIM = 10  # qubit (theta, phi) + two-qubit (4 re, 4 im)
W_DIM = 13  # raw lambdas (4) + per-party (theta, phi_alpha, phi_beta)
SPLITS = (1, 2, 3)  # the party standing alone
PRODUCT_DIM = 6  # (theta, phi) per party
BISEPARABLE_KINDS = ("product",) + SPLITS


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized three-qubit state vector."""
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (8,):
            raise NormalizationError(f"Expected 8 amplitudes, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise NormalizationError(f"State norm {norm:.15f} differs from 1")
        object.__setattr__(self, "amplitudes", amps)

    def amplitude(self, i: int, j: int, k: int) -> complex:
        return complex(self.amplitudes[4 * i + 2 * j + k])

    def density(self) -> np.ndarray:
        return projector(self.amplitudes)


def _check_weights(values: Tuple[float, ...], label: str) -> None:
    arr = np.asarray(values, dtype=float)
    if np.any(arr < 0):
        raise NormalizationError(f"{label} weights must be nonnegative")
    total = float(np.sum(arr ** 2))
    if abs(total - 1.0) > NORM_TOL:
        raise NormalizationError(f"{label} weights square-sum to {total:.15f}")


@dataclass(frozen=True)
class WParams:
    """Weights of lambda0|000> + lambda1|100> + lambda2|101> + lambda3|110>."""
    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        _check_weights(self.as_tuple(), "W")

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.lambda0, self.lambda1, self.lambda2, self.lambda3)

    @classmethod
    def from_raw(cls, raw) -> "WParams":
        lam = np.abs(np.asarray(raw, dtype=float))
        lam = lam / np.linalg.norm(lam)
        return cls(*map(float, lam))


@dataclass(frozen=True)
class GhzParams:
    """Weights and phase of the GHZ-class canonical form."""
    lambda0: float
    lambda1: float
    lambda2: float
    lambda3: float
    lambda4: float
    theta: float = 0.0

    def __post_init__(self):
        _check_weights(self.weights(), "GHZ")
        if not 0.0 <= self.theta <= np.pi:
            raise NormalizationError(f"GHZ phase {self.theta} outside [0, pi]")

    def weights(self) -> Tuple[float, ...]:
        return (self.lambda0, self.lambda1, self.lambda2, self.lambda3, self.lambda4)


@dataclass(frozen=True)
class LocalSU2:
    """One (alpha, beta) pair per party, |alpha|^2 + |beta|^2 = 1."""
    pairs: Tuple[Tuple[complex, complex], ...]

    def __post_init__(self):
        pairs = tuple((complex(a), complex(b)) for a, b in self.pairs)
        if len(pairs) != 3:
            raise NormalizationError(f"Need 3 (alpha, beta) pairs, got {len(pairs)}")
        for n, (a, b) in enumerate(pairs, 1):
            norm = abs(a) ** 2 + abs(b) ** 2
            if abs(norm - 1.0) > NORM_TOL:
                raise NormalizationError(f"Party {n}: |alpha|^2+|beta|^2 = {norm:.15f}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def identity(cls) -> "LocalSU2":
        return cls(((1.0, 0.0),) * 3)

    @classmethod
    def uniform(cls, alpha: complex, beta: complex) -> "LocalSU2":
        return cls(((alpha, beta),) * 3)

    def blocks(self) -> np.ndarray:
        """Per-party 2x2 maps, columns are the images of |0> and |1>."""
        return np.array([amplitude_map(a, b) for a, b in self.pairs])

    def operator(self) -> np.ndarray:
        b = self.blocks()
        return np.kron(np.kron(b[0], b[1]), b[2])


def amplitude_map(alpha, beta) -> np.ndarray:
    """[[alpha, conj(beta)], [beta, -conj(alpha)]], broadcasting over inputs."""
    alpha = np.asarray(alpha, dtype=np.complex128)
    beta = np.asarray(beta, dtype=np.complex128)
    top = np.stack([alpha, beta.conj()], axis=-1)
    bottom = np.stack([beta, -alpha.conj()], axis=-1)
    return np.stack([top, bottom], axis=-2)


def apply_local(blocks: np.ndarray, core: np.ndarray) -> np.ndarray:
    """Apply per-party 2x2 maps (..., 3, 2, 2) to core vectors (..., 8)."""
    t = np.asarray(core, dtype=np.complex128).reshape(core.shape[:-1] + (2, 2, 2))
    out = np.einsum(
        "...ai,...bj,...ck,...ijk->...abc",
        blocks[..., 0, :, :],
        blocks[..., 1, :, :],
        blocks[..., 2, :, :],
        t,
    )
    return out.reshape(out.shape[:-3] + (8,))


# ---------------------------------------------------------------------------
# Named states and projectors
# ---------------------------------------------------------------------------

def basis_state(bits: str) -> np.ndarray:
    vec = np.zeros(8, dtype=np.complex128)
    vec[int(bits, 2)] = 1.0
    return vec


def spin_product(i: int, j: int) -> np.ndarray:
    """sigma(i) . sigma(j), identity on the remaining party."""
    dot = sum(np.kron(p, p) for p in PAULIS)
    return embed_pair(dot, i, j)


def singlet_projector(i: int, j: int) -> np.ndarray:
    """|Psi-><Psi-| on parties i and j, identity elsewhere."""
    singlet = np.array([0.0, SQRT_HALF, -SQRT_HALF, 0.0], dtype=np.complex128)
    return embed_pair(projector(singlet), i, j)


def w_basis_states() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """|W1>, |W2> and |Psi-_123> = (|000> - |111>)/sqrt(2)."""
    w1 = (basis_state("001") + basis_state("010") + basis_state("100")) / np.sqrt(3)
    w2 = (basis_state("011") + basis_state("110") + basis_state("101")) / np.sqrt(3)
    psi_minus = (basis_state("000") - basis_state("111")) * SQRT_HALF
    return w1, w2, psi_minus


def ghz_plus() -> np.ndarray:
    return (basis_state("000") + basis_state("111")) * SQRT_HALF


def w_core(p: WParams) -> np.ndarray:
    core = np.zeros(8, dtype=np.complex128)
    core[0b000], core[0b100], core[0b101], core[0b110] = p.as_tuple()
    return core


def ghz_core(p: GhzParams) -> np.ndarray:
    core = np.zeros(8, dtype=np.complex128)
    core[0b000] = p.lambda0
    core[0b100] = p.lambda1 * np.exp(1j * p.theta)
    core[0b101] = p.lambda2
    core[0b110] = p.lambda3
    core[0b111] = p.lambda4
    return core


def w_amplitudes(p: WParams, u: LocalSU2) -> np.ndarray:
    """Closed-form amplitudes A_ijk of the rotated W-class vector."""
    l0, l1, l2, l3 = p.as_tuple()
    (a1, b1), (a2, b2), (a3, b3) = u.pairs
    a1c, a2c, a3c = a1.conjugate(), a2.conjugate(), a3.conjugate()
    b1c, b2c, b3c = b1.conjugate(), b2.conjugate(), b3.conjugate()
    return np.array([
        l0 * a1 * a2 * a3 + l1 * b1c * a2 * a3 + l2 * b1c * a2 * b3c + l3 * b1c * b2c * a3,
        l0 * a1 * a2 * b3 + l1 * b1c * a2 * b3 - l2 * b1c * a2 * a3c + l3 * b1c * b2c * b3,
        l0 * a1 * b2 * a3 + l1 * b1c * b2 * a3 + l2 * b1c * b2 * b3c - l3 * b1c * a2c * a3,
        l0 * a1 * b2 * b3 + l1 * b1c * b2 * b3 - l2 * b1c * b2 * a3c - l3 * b1c * a2c * b3,
        l0 * b1 * a2 * a3 - l1 * a1c * a2 * a3 - l2 * a1c * a2 * b3c - l3 * a1c * b2c * a3,
        l0 * b1 * a2 * b3 - l1 * a1c * a2 * b3 + l2 * a1c * a2 * a3c - l3 * a1c * b2c * b3,
        l0 * b1 * b2 * a3 - l1 * a1c * b2 * a3 - l2 * a1c * b2 * b3c + l3 * a1c * a2c * a3,
        l0 * b1 * b2 * b3 - l1 * a1c * b2 * b3 + l2 * a1c * b2 * a3c + l3 * a1c * a2c * b3,
    ], dtype=np.complex128)


def generic_w(p: WParams, u: LocalSU2) -> PureState:
    return PureState(w_amplitudes(p, u))


def generic_ghz(p: GhzParams, u: LocalSU2) -> PureState:
    return PureState(u.operator() @ ghz_core(p))


def w_class_exhibit() -> Tuple[WParams, LocalSU2, PureState]:
    """
    W-orbit representation of (|100> - 2|010> + |001>)/sqrt(6).

    The returned state equals i times that vector.
    """
    s6 = np.sqrt(6.0)
    params = WParams(1 / s6, 0.0, 1 / s6, 2 / s6)
    local = LocalSU2(((0.0, 1.0), (1.0, 0.0), (1j, 0.0)))
    return params, local, generic_w(params, local)


# ---------------------------------------------------------------------------
# Closed-form expectations on a W-class vector
# ---------------------------------------------------------------------------

_Z_SIGNS = np.array([[1 - 2 * ((n >> s) & 1) for s in (2, 1, 0)] for n in range(8)])


def _diag_part(amps: np.ndarray, first: int, second: int) -> float:
    weights = np.abs(amps) ** 2
    return float(np.sum(weights * _Z_SIGNS[:, first] * _Z_SIGNS[:, second]))


def _flip_terms(amps: np.ndarray, pairs) -> float:
    return float(4.0 * sum((amps[x] * amps[y].conjugate()).real for x, y in pairs))


def w_pair_expectations(amps: np.ndarray) -> Tuple[float, float, float]:
    """<P12>, <P13>, <P23> with P_ij the spin product of the pair."""
    A = np.asarray(amps, dtype=np.complex128)
    p12 = _diag_part(A, 0, 1) + _flip_terms(A, [(0b010, 0b100), (0b011, 0b101)])
    p13 = _diag_part(A, 0, 2) + _flip_terms(A, [(0b001, 0b100), (0b011, 0b110)])
    p23 = _diag_part(A, 1, 2) + _flip_terms(A, [(0b001, 0b010), (0b101, 0b110)])
    return p12, p13, p23


def w_stabilizer_expectations(amps: np.ndarray) -> Tuple[float, float, float]:
    """<XXX>, <ZZI> and <XXX ZZI> = <-YYX>."""
    A = np.asarray(amps, dtype=np.complex128)

    def re(x, y):
        return (A[x] * A[y].conjugate()).real

    s1 = 2.0 * (re(0b000, 0b111) + re(0b001, 0b110) + re(0b010, 0b101) + re(0b011, 0b100))
    s2 = _diag_part(A, 0, 1)
    s12 = 2.0 * (re(0b000, 0b111) + re(0b001, 0b110)) - 2.0 * (re(0b010, 0b101) + re(0b011, 0b100))
    return float(s1), s2, float(s12)


def w_projector_expectations(amps: np.ndarray) -> Tuple[float, float, float, float]:
    """Expectations of 2*sum(singlet projectors), 3|W1><W1|, 3|W2><W2|, 2|Psi-_123><Psi-_123|."""
    A = np.asarray(amps, dtype=np.complex128)
    p12, p13, p23 = w_pair_expectations(A)
    p1 = (3.0 - p12 - p13 - p23) / 2.0
    p2 = abs(A[0b001] + A[0b010] + A[0b100]) ** 2
    p3 = abs(A[0b011] + A[0b110] + A[0b101]) ** 2
    p4 = abs(A[0b000] - A[0b111]) ** 2
    return p1, float(p2), float(p3), float(p4)


# ---------------------------------------------------------------------------
# Vectorized builders
# ---------------------------------------------------------------------------

def _qubit(x: np.ndarray) -> np.ndarray:
    theta, phi = x[..., 0], x[..., 1]
    return np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)


def _two_qubit(x: np.ndarray) -> np.ndarray:
    c = x[..., :4] + 1j * x[..., 4:8]
    return c / np.linalg.norm(c, axis=-1, keepdims=True)


def biseparable_state(split: int, x: np.ndarray) -> np.ndarray:
    """Product of a single qubit on party `split` and a two-qubit state on the rest."""
    x = np.asarray(x, dtype=float)
    q = _qubit(x[..., :2])
    chi = _two_qubit(x[..., 2:BISEPARABLE_DIM]).reshape(x.shape[:-1] + (2, 2))
    t = q[..., :, None, None] * chi[..., None, :, :]
    t = np.moveaxis(t, -3, -3 + (split - 1))
    return t.reshape(x.shape[:-1] + (8,))


def product_state(x: np.ndarray) -> np.ndarray:
    """Full product of three single-qubit states."""
    x = np.asarray(x, dtype=float)
    q1, q2, q3 = (_qubit(x[..., 2 * k:2 * k + 2]) for k in range(3))
    t = q1[..., :, None, None] * q2[..., None, :, None] * q3[..., None, None, :]
    return t.reshape(x.shape[:-1] + (8,))


def local_blocks(x: np.ndarray) -> np.ndarray:
    """(..., 9) angles -> (..., 3, 2, 2) amplitude maps."""
    x = np.asarray(x, dtype=float)
    x = x.reshape(x.shape[:-1] + (3, 3))
    theta, phi_a, phi_b = x[..., 0], x[..., 1], x[..., 2]
    alpha = np.cos(theta / 2) * np.exp(1j * phi_a)
    beta = np.sin(theta / 2) * np.exp(1j * phi_b)
    return amplitude_map(alpha, beta)


def w_state(x: np.ndarray) -> np.ndarray:
    """Rotated W-class vector from raw lambdas and per-party angles."""
    x = np.asarray(x, dtype=float)
    lam = np.abs(x[..., :4])
    lam = lam / np.linalg.norm(lam, axis=-1, keepdims=True)
    core = np.zeros(x.shape[:-1] + (8,), dtype=np.complex128)
    core[..., 0b000] = lam[..., 0]
    core[..., 0b100] = lam[..., 1]
    core[..., 0b101] = lam[..., 2]
    core[..., 0b110] = lam[..., 3]
    return apply_local(local_blocks(x[..., 4:W_DIM]), core)


def _haar_angles(rng: np.random.Generator, size) -> np.ndarray:
    """(theta, phi_a, phi_b) with cos(theta) uniform and uniform phases."""
    theta = np.arccos(rng.uniform(-1.0, 1.0, size))
    phi_a = rng.uniform(0.0, 2 * np.pi, size)
    phi_b = rng.uniform(0.0, 2 * np.pi, size)
    return np.stack([theta, phi_a, phi_b], axis=-1)


def haar_su2_pairs(rng: np.random.Generator, size) -> Tuple[np.ndarray, np.ndarray]:
    angles = _haar_angles(rng, size)
    alpha = np.cos(angles[..., 0] / 2) * np.exp(1j * angles[..., 1])
    beta = np.sin(angles[..., 0] / 2) * np.exp(1j * angles[..., 2])
    return alpha, beta


def draw_biseparable_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """Parameter vectors giving a Haar qubit times a Haar two-qubit state."""
    qubit = _haar_angles(rng, n)[:, :2]
    pair = rng.normal(size=(n, 8))
    return np.concatenate([qubit, pair], axis=1)


def draw_product_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    return _haar_angles(rng, (n, 3))[..., :2].reshape(n, PRODUCT_DIM)


def draw_w_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    lam = rng.normal(size=(n, 4))
    angles = _haar_angles(rng, (n, 3)).reshape(n, 9)
    return np.concatenate([lam, angles], axis=1)


@dataclass
class PureSample:
    """A pure state together with the builder that produced it."""
    state: np.ndarray
    vector: np.ndarray
    builder: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    label: str = ""


def _biseparable_builder(split: int) -> Callable[[np.ndarray], np.ndarray]:
    def build(x: np.ndarray) -> np.ndarray:
        return biseparable_state(split, x)
    return build


def sample_biseparable_pure(rng: np.random.Generator) -> PureSample:
    """A full product state or a state entangled across one split, chosen uniformly."""
    kind = BISEPARABLE_KINDS[int(rng.integers(len(BISEPARABLE_KINDS)))]
    if kind == "product":
        x = draw_product_vectors(rng, 1)[0]
        return PureSample(product_state(x), x, product_state, "product")
    split = int(kind)
    x = draw_biseparable_vectors(rng, 1)[0]
    build = _biseparable_builder(split)
    return PureSample(build(x), x, build, f"split-{split}")


def sample_w_pure(rng: np.random.Generator) -> PureSample:
    x = draw_w_vectors(rng, 1)[0]
    return PureSample(w_state(x), x, w_state, "w")


def _mixture(rng: np.random.Generator, states: List[np.ndarray]) -> np.ndarray:
    weights = rng.dirichlet(np.ones(len(states)))
    rho = np.zeros((8, 8), dtype=np.complex128)
    for w, psi in zip(weights, states):
        rho += w * np.outer(psi, psi.conj())
    return rho


def _n_terms(rng: np.random.Generator) -> int:
    low, high = MIXTURE_TERMS
    return int(rng.integers(low, high + 1))


def sample_biseparable(rng: np.random.Generator) -> np.ndarray:
    """Random biseparable density matrix: a Dirichlet mixture of pure terms."""
    states = [sample_biseparable_pure(rng).state for _ in range(_n_terms(rng))]
    return _mixture(rng, states)


def sample_w_mixed(rng: np.random.Generator) -> np.ndarray:
    """Random W-class mixture containing at least one generic W projector."""
    n = _n_terms(rng)
    states = [sample_w_pure(rng).state]
    for _ in range(n - 1):
        if rng.random() < 0.5:
            states.append(sample_w_pure(rng).state)
        else:
            states.append(sample_biseparable_pure(rng).state)
    return _mixture(rng, states)


# ---------------------------------------------------------------------------
# Refinement
# ---------------------------------------------------------------------------

def refine_maximum(
    objective: Callable[[np.ndarray], float],
    builder: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    iterations: int = REFINE_ITERATIONS,
    step: float = 0.5,
    tol: float = 1e-13,
) -> Tuple[np.ndarray, float]:
    """
    Coordinate-wise golden-section ascent of objective(builder(x)).

    Args:
        objective: Maps a state vector to a real value
        builder: Maps a parameter vector to a state vector
        x0: Starting parameters
        iterations: Maximum number of full coordinate sweeps
        step: Initial bracket width per coordinate
        tol: Stop when a sweep improves by less than this

    Returns:
        Tuple of (best parameters, best value); the value never drops below
        objective(builder(x0))
    """
    x = np.array(x0, dtype=float)
    best = float(objective(builder(x)))

    for sweep in range(iterations):
        start = best
        for k in range(x.size):
            def line(t: float, k: int = k) -> float:
                trial = x.copy()
                trial[k] = t
                return -float(objective(builder(trial)))

            try:
                res = minimize_scalar(line, bracket=(x[k], x[k] + step), method="golden")
            except (RuntimeError, ValueError):
                continue
            if np.isfinite(res.fun) and -res.fun > best:
                x[k] = res.x
                best = -float(res.fun)
        if best - start < tol:
            logger.debug(f"Refinement converged after {sweep + 1} sweeps at {best:.12f}")
            break

    return x, best


def best_sample(
    objective_batch: Callable[[np.ndarray], np.ndarray],
    builder: Callable[[np.ndarray], np.ndarray],
    vectors: np.ndarray,
) -> Tuple[Optional[np.ndarray], float]:
    """Highest objective among a batch of parameter vectors."""
    if len(vectors) == 0:
        return None, -np.inf
    values = objective_batch(builder(vectors))
    idx = int(np.argmax(values))
    return vectors[idx], float(values[idx])
