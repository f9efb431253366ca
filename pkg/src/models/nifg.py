"""
Three-fermion reduced density matrix of the noninteracting Fermi gas.

The spin state of three fermions at fixed positions is

    rho3 = eta*I + (a/2)Pi_12 + (b/2)Pi_13 + (c/2)Pi_23
         = I/8 - (a/8) s1.s2 - (b/8) s1.s3 - (c/8) s2.s3

with Pi_ij the singlet projector on a pair and eta = (1 - a - b - c)/8.
The coefficients (a, b, c) = (p12, p13, p23) follow from the Slater
factors of the three pair separations.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq, minimize_scalar
from scipy.special import spherical_jn

from ..config import (
    DENOMINATOR_TOL,
    PSD_SLACK,
    SLATER_TAYLOR_CUTOFF,
    VALIDITY_SLACK,
)
from ..linalg import partial_transpose, trace_norm
from .states import spin_product

logger = logging.getLogger(__name__)

PAIRS = ((1, 2), (1, 3), (2, 3))
RADIUS_GRID_STEP = 1e-4
RADIUS_XTOL = 1e-12


class CoincidentParticlesError(ValueError):
    pass


class InvalidCoefficientsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeometryConfig:
    """
    Placement of three particles, all lengths in units of 1/k_F.

    kind "1d": collinear, x12 = kf_x, x13 = kf_r, x23 = |kf_r - kf_x|
    kind "2d": x12 = kf_r|cos(theta/2)|, x23 = kf_r|sin(theta/2)|, x13 = kf_r
    """
    kind: str
    kf_r: float
    kf_x: Optional[float] = None
    theta: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("1d", "2d"):
            raise ValueError(f"Unknown geometry kind '{self.kind}'")
        if self.kf_r < 0:
            raise ValueError(f"kf_r must be nonnegative, got {self.kf_r}")
        if self.kind == "1d":
            if self.kf_x is None or self.kf_x < 0:
                raise ValueError("1d geometry needs kf_x >= 0")
        else:
            if self.theta is None or not 0.0 <= self.theta < 2 * math.pi:
                raise ValueError("2d geometry needs theta in [0, 2pi)")

    @classmethod
    def one_d(cls, kf_r: float, kf_x: float) -> "GeometryConfig":
        return cls("1d", kf_r=kf_r, kf_x=kf_x)

    @classmethod
    def two_d(cls, kf_r: float, theta: float) -> "GeometryConfig":
        return cls("2d", kf_r=kf_r, theta=theta)

    def separations(self) -> Tuple[float, float, float]:
        """(x12, x13, x23)."""
        if self.kind == "1d":
            return (self.kf_x, self.kf_r, abs(self.kf_r - self.kf_x))
        half = self.theta / 2.0
        return (
            self.kf_r * abs(math.cos(half)),
            self.kf_r,
            self.kf_r * abs(math.sin(half)),
        )

    @property
    def secondary(self) -> float:
        return self.kf_x if self.kind == "1d" else self.theta


@dataclass(frozen=True)
class NifgCoefficients:
    """Pair weights (a, b, c) = (p12, p13, p23)."""
    a: float
    b: float
    c: float
    slater: Optional[Tuple[float, float, float]] = field(default=None, compare=False)

    @property
    def eta(self) -> float:
        return (1.0 - self.a - self.b - self.c) / 8.0

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.a, self.b, self.c)


# ---------------------------------------------------------------------------
# Slater factor
# ---------------------------------------------------------------------------

def slater_factor(x):
    """
    Normalized exchange factor f(x) = 3(sin x - x cos x)/x^3, f(0) = 1.

    Accepts scalars or arrays; x must be nonnegative.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise ValueError("Slater factor needs x >= 0")
    small = arr < SLATER_TAYLOR_CUTOFF
    safe = np.where(small, 1.0, arr)
    exact = 3.0 * (np.sin(safe) - safe * np.cos(safe)) / safe ** 3
    series = 1.0 - arr ** 2 / 10.0 + arr ** 4 / 280.0
    out = np.where(small, series, exact)
    return float(out) if out.ndim == 0 else out


def slater_factor_quadrature(x: float) -> float:
    """Fermi-sphere integral 3*int_0^1 u^2 sin(ux)/(ux) du, by adaptive quadrature."""
    if x < 0:
        raise ValueError("Slater factor needs x >= 0")
    value, _ = quad(lambda u: 3.0 * u * u * np.sinc(u * x / np.pi), 0.0, 1.0,
                    epsabs=1e-13, epsrel=1e-13)
    return float(value)


def _radius_bracket(func, upper: float = math.pi) -> Tuple[float, float]:
    grid = np.arange(RADIUS_GRID_STEP, upper + RADIUS_GRID_STEP, RADIUS_GRID_STEP)
    values = func(grid)
    crossing = np.nonzero(np.sign(values[1:]) != np.sign(values[:-1]))[0]
    if crossing.size == 0:
        raise ValueError("No sign change on the radius grid")
    i = int(crossing[0])
    return float(grid[i]), float(grid[i + 1])


def entanglement_radius() -> float:
    """Smallest positive x with f(x)^2 = 1/2."""
    def g(x):
        return np.asarray(slater_factor(x)) ** 2 - 0.5

    lo, hi = _radius_bracket(g)
    root = brentq(lambda t: float(g(t)), lo, hi, xtol=RADIUS_XTOL)
    logger.debug(f"Entanglement radius k_F r_e = {root:.12f}")
    return float(root)


@dataclass
class RadiusDiagnostics:
    f_root: float  # f^2 = 1/2
    j1_root: Optional[float]  # j1^2 = 1/2, None if no root
    j1_max: float
    j1_argmax: float


def entanglement_radius_diagnostics() -> RadiusDiagnostics:
    """Root of f^2 = 1/2 together with the unnormalized j1^2 = 1/2 reading."""
    f_root = entanglement_radius()

    res = minimize_scalar(lambda t: -spherical_jn(1, t), bounds=(0.5, 4.0), method="bounded")
    j1_max = float(-res.fun)
    j1_root = None
    if j1_max ** 2 >= 0.5:
        lo, hi = _radius_bracket(lambda t: spherical_jn(1, t) ** 2 - 0.5, upper=float(res.x))
        j1_root = float(brentq(lambda t: spherical_jn(1, t) ** 2 - 0.5, lo, hi, xtol=RADIUS_XTOL))
    else:
        logger.info(f"j1^2 = 1/2 has no root: max j1 = {j1_max:.6f} at x = {res.x:.6f}")
    return RadiusDiagnostics(f_root, j1_root, j1_max, float(res.x))


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------

def coefficients_from_slater(f12: float, f13: float, f23: float) -> NifgCoefficients:
    """p_ij = (-f_ij^2 + f_ij f_ik f_jk) / (-2 + f12^2 + f13^2 + f23^2 - f12 f13 f23)."""
    triple = f12 * f13 * f23
    denom = -2.0 + f12 ** 2 + f13 ** 2 + f23 ** 2 - triple
    if abs(denom) < DENOMINATOR_TOL:
        raise CoincidentParticlesError(f"Vanishing denominator {denom:.3e}")
    a = (-f12 ** 2 + triple) / denom
    b = (-f13 ** 2 + triple) / denom
    c = (-f23 ** 2 + triple) / denom
    return NifgCoefficients(a, b, c, slater=(f12, f13, f23))


def coefficients_from_geometry(g: GeometryConfig) -> NifgCoefficients:
    seps = g.separations()
    if min(seps) < DENOMINATOR_TOL:
        raise CoincidentParticlesError(f"Coincident particles for {g} (separations {seps})")
    f12, f13, f23 = (slater_factor(x) for x in seps)
    return coefficients_from_slater(f12, f13, f23)


# ---------------------------------------------------------------------------
# Density matrix
# ---------------------------------------------------------------------------

_SPIN_PRODUCTS = {pair: spin_product(*pair) for pair in PAIRS}


def rho3_pauli_form(c: NifgCoefficients) -> np.ndarray:
    rho = np.eye(8, dtype=np.complex128) / 8.0
    for coeff, pair in zip(c.as_tuple(), PAIRS):
        rho -= (coeff / 8.0) * _SPIN_PRODUCTS[pair]
    return rho


def rho3_explicit(c: NifgCoefficients) -> np.ndarray:
    """The 8x8 matrix written entry by entry."""
    a, b, cc = c.as_tuple()
    eta = c.eta
    rho = np.diag([
        eta,
        eta + (b + cc) / 4,
        eta + (a + cc) / 4,
        eta + (a + b) / 4,
        eta + (a + b) / 4,
        eta + (a + cc) / 4,
        eta + (b + cc) / 4,
        eta,
    ]).astype(np.complex128)
    for (i, j), value in (
        ((1, 2), -cc / 4), ((1, 4), -b / 4), ((2, 4), -a / 4),
        ((3, 5), -a / 4), ((3, 6), -b / 4), ((5, 6), -cc / 4),
    ):
        rho[i, j] = rho[j, i] = value
    return rho


def _doublet_terms(a: float, b: float, c: float) -> Tuple[float, float]:
    s = a + b + c
    q = a * a + b * b + c * c - a * b - b * c - c * a
    return s, math.sqrt(max(q, 0.0))


def rho3_eigenvalues(c: NifgCoefficients) -> np.ndarray:
    """Ascending spectrum: eta (x4) and (1 + s -/+ 2 sqrt(Q))/8 (x2 each)."""
    s, root = _doublet_terms(*c.as_tuple())
    values = [c.eta] * 4 + [(1 + s - 2 * root) / 8] * 2 + [(1 + s + 2 * root) / 8] * 2
    return np.sort(np.array(values))


@dataclass
class Validity:
    valid: bool
    failures: List[str]


def validity(c: NifgCoefficients) -> Validity:
    """Check the eigenvalue conditions a density operator must satisfy."""
    a, b, cc = c.as_tuple()
    q = a * a + b * b + cc * cc - a * b - b * cc - cc * a
    s, root = _doublet_terms(a, b, cc)
    failures = []
    if (1 + s) / 8 - root / 4 < -VALIDITY_SLACK:
        failures.append(f"doublet eigenvalue {(1 + s - 2 * root) / 8:.3e} < 0")
    if q < -VALIDITY_SLACK:
        failures.append(f"a^2+b^2+c^2-ab-bc-ca = {q:.3e} < 0")
    if c.eta < -VALIDITY_SLACK:
        failures.append(f"eta = {c.eta:.3e} < 0")
    return Validity(not failures, failures)


def build_rho3(c: NifgCoefficients) -> np.ndarray:
    """
    Density matrix of the three-fermion spin state.

    Raises:
        InvalidCoefficientsError: smallest eigenvalue below -PSD_SLACK
    """
    rho = rho3_pauli_form(c)
    explicit = rho3_explicit(c)
    gap = float(np.max(np.abs(rho - explicit)))
    if gap > 1e-14:
        raise AssertionError(f"Pauli and explicit forms differ by {gap:.3e}")
    low = float(rho3_eigenvalues(c)[0])
    if low < -PSD_SLACK:
        raise InvalidCoefficientsError(
            f"Coefficients {c.as_tuple()} give eigenvalue {low:.3e}"
        )
    return rho


# ---------------------------------------------------------------------------
# Partial transposition
# ---------------------------------------------------------------------------

def _flipped(c: NifgCoefficients, party: int) -> Tuple[float, float, float]:
    """Coefficients of the partial transpose: pairs touching `party` change sign."""
    if party not in (1, 2, 3):
        raise ValueError(f"Party must be 1, 2 or 3, got {party}")
    return tuple(
        -coeff if party in pair else coeff
        for coeff, pair in zip(c.as_tuple(), PAIRS)
    )


def partial_transpose_eigenvalues(c: NifgCoefficients, party: int) -> np.ndarray:
    a, b, cc = _flipped(c, party)
    return rho3_eigenvalues(NifgCoefficients(a, b, cc))


def ppt_condition(c: NifgCoefficients, party: int) -> bool:
    """
    Closed-form positivity of rho3 partially transposed on `party`.

    With t the sum of the sign-flipped coefficients and Q' their quadratic
    form, the condition is 2 sqrt(Q') - 1 <= t <= 1.
    """
    a, b, cc = _flipped(c, party)
    t = a + b + cc
    q = a * a + b * b + cc * cc - a * b - b * cc - cc * a
    slack = 8.0 * PSD_SLACK
    return bool(q >= -slack and 2.0 * math.sqrt(max(q, 0.0)) - 1.0 <= t + slack and t <= 1.0 + slack)


def negativity(c: NifgCoefficients, party: int) -> float:
    """(||rho3^T_party||_1 - 1) / 2."""
    rho = build_rho3(c)
    value = (trace_norm(partial_transpose(rho, party)) - 1.0) / 2.0
    return max(value, 0.0)


__all__ = [
    "CoincidentParticlesError",
    "InvalidCoefficientsError",
    "GeometryConfig",
    "NifgCoefficients",
    "RadiusDiagnostics",
    "Validity",
    "slater_factor",
    "slater_factor_quadrature",
    "entanglement_radius",
    "entanglement_radius_diagnostics",
    "coefficients_from_slater",
    "coefficients_from_geometry",
    "rho3_pauli_form",
    "rho3_explicit",
    "rho3_eigenvalues",
    "validity",
    "build_rho3",
    "partial_transpose_eigenvalues",
    "ppt_condition",
    "negativity",
]
