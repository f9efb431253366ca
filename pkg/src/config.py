"""
Configuration settings for Tool_fermiwit.
"""
import math
import os
from pathlib import Path

# Data storage
PROJECT_ROOT = Path(__file__).parent.parent
OUTPUT_DIR = Path(os.environ.get("FERMIWIT_OUTPUT_DIR", PROJECT_ROOT / "output"))
OUTPUT_DIR.mkdir(parents=True, exist_ok=True)

# Linear algebra tolerances
HERMITIAN_TOL = 1e-12
JACOBI_OFF_TOL = 1e-13  # off-diagonal Frobenius norm, scaled by max(1, ||m||_F)
JACOBI_MAX_SWEEPS = 50
IMAG_RESIDUE_TOL = 1e-9
NORM_TOL = 1e-12

# Physics tolerances
PSD_SLACK = 1e-10  # min eigenvalue accepted as nonnegative
VALIDITY_SLACK = 1e-12
DETECTION_THRESHOLD = -1e-9  # witness value below this counts as detection
DENOMINATOR_TOL = 1e-12
SLATER_TAYLOR_CUTOFF = 1e-2  # below this, f(x) uses its power series

# Linear programming
VERTEX_DEDUP_TOL = 1e-8
FEASIBILITY_TOL = 1e-9
PIVOT_TOL = 1e-12
MAX_PIVOTS = 10_000
BOUND_SLACK = 1e-6

# Rotation search
ROTATION_GRID = 128  # points per axis on the (t, phi) grid
NELDER_MEAD_TOL = 1e-10

# Sampling
REFINE_ITERATIONS = 200
MIXTURE_TERMS = (2, 6)  # inclusive range of pure terms per mixed sample
DEFAULT_SEED = 20240101
DEFAULT_SAMPLES = 100_000

# Witness constants
SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)
SQRT8 = math.sqrt(8.0)
W_GEN_CONSTANT = 1.0 + SQRT5
SPIN_CHAIN_BOUND = 1.0 + SQRT8
GHZ_PROJECTOR_BOUND = 15.0 / 4.0
STABILIZER_B_BOUND = SQRT2
GHZ_STABILIZER_BOUND = 2.98  # kept as the two-decimal literal

# Scan grids
KF_STEP_1D = 0.1
KF_STEP_2D = 0.2
THETA_POINTS = 256
MAX_SCAN_POINTS = 10**6

# CSV emission
CSV_FLOAT_FORMAT = "#.12g"  # 12 significant digits, trailing zeros kept
