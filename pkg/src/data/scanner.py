"""
Geometry sweeps over rho3: coefficients, witness traces, verdicts and PPT data
per grid point, plus the detection windows of a finished scan.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config import (
    DEFAULT_SEED,
    DETECTION_THRESHOLD,
    KF_STEP_1D,
    MAX_SCAN_POINTS,
    REFINE_ITERATIONS,
    ROTATION_GRID,
    THETA_POINTS,
    VALIDITY_SLACK,
)
from ..models.nifg import (
    CoincidentParticlesError,
    GeometryConfig,
    InvalidCoefficientsError,
    build_rho3,
    coefficients_from_geometry,
    negativity,
)
from ..models.rotations import minimize_over_rotations
from ..models.witnesses import PANEL, PANEL_BY_NAME, classify, purity_bound_check
from .storage import ScanStorage

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScanRequest:
    """
    A rectangular sweep of particle geometries.

    For "1d" the secondary axis is kf_x on [secondary_min, secondary_max] with
    secondary_step (defaults 0, 0.1 and 0.005). For "2d" it is theta on
    [0, 2pi) with theta_points samples, and the secondary range must be left unset.
    """
    geometry: str = "1d"
    kf_r_min: float = 0.1
    kf_r_max: float = 0.1
    kf_r_step: float = KF_STEP_1D
    secondary_min: Optional[float] = None
    secondary_max: Optional[float] = None
    secondary_step: Optional[float] = None
    theta_points: int = THETA_POINTS
    witnesses: Tuple[str, ...] = tuple(spec.name for spec in PANEL)
    rotation: bool = False
    rotation_grid: int = ROTATION_GRID
    seed: int = DEFAULT_SEED
    output: Optional[Path] = None
    workers: int = 1
    purity_samples: int = 0  # 0 disables the purity column
    refine_iterations: int = REFINE_ITERATIONS

    def __post_init__(self):
        if self.geometry not in ("1d", "2d"):
            raise ValueError(f"Unknown geometry '{self.geometry}'")
        if self.kf_r_step <= 0:
            raise ValueError(f"kf_r step must be positive, got {self.kf_r_step}")
        if self.kf_r_min < 0 or self.kf_r_max < self.kf_r_min:
            raise ValueError(f"Empty kf_r range [{self.kf_r_min}, {self.kf_r_max}]")
        if self.geometry == "1d":
            for name, default in (("secondary_min", 0.0), ("secondary_max", 0.1), ("secondary_step", 0.005)):
                if getattr(self, name) is None:
                    object.__setattr__(self, name, default)
            if self.secondary_step <= 0:
                raise ValueError(f"kf_x step must be positive, got {self.secondary_step}")
            if self.secondary_min < 0 or self.secondary_max < self.secondary_min:
                raise ValueError(f"Empty kf_x range [{self.secondary_min}, {self.secondary_max}]")
        else:
            if any(v is not None for v in (self.secondary_min, self.secondary_max, self.secondary_step)):
                raise ValueError("2d scans sweep theta over [0, 2pi); set theta_points instead of a kf_x range")
            if self.theta_points < 1:
                raise ValueError(f"theta_points must be positive, got {self.theta_points}")
        unknown = [w for w in self.witnesses if w not in PANEL_BY_NAME]
        if unknown:
            raise ValueError(f"Unknown witnesses {unknown}, choose from {sorted(PANEL_BY_NAME)}")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")
        if self.rotation_grid < 2:
            raise ValueError(f"rotation_grid must be at least 2, got {self.rotation_grid}")
        if self.purity_samples < 0:
            raise ValueError(f"purity_samples must be nonnegative, got {self.purity_samples}")
        if self.n_points > MAX_SCAN_POINTS:
            raise ValueError(f"{self.n_points} grid points exceeds the limit of {MAX_SCAN_POINTS}")

    def kf_r_axis(self) -> np.ndarray:
        return _axis(self.kf_r_min, self.kf_r_max, self.kf_r_step)

    def secondary_axis(self) -> np.ndarray:
        if self.geometry == "1d":
            return _axis(self.secondary_min, self.secondary_max, self.secondary_step)
        return np.linspace(0.0, 2 * math.pi, self.theta_points, endpoint=False)

    @property
    def n_points(self) -> int:
        """Grid size, counted without building the axes."""
        n_r = _axis_length(self.kf_r_min, self.kf_r_max, self.kf_r_step)
        if self.geometry == "1d":
            return n_r * _axis_length(self.secondary_min, self.secondary_max, self.secondary_step)
        return n_r * self.theta_points

    def grid(self) -> List[GeometryConfig]:
        """Grid points ordered by kf_r, then by the secondary axis."""
        build = GeometryConfig.one_d if self.geometry == "1d" else GeometryConfig.two_d
        return [build(float(r), float(s)) for r in self.kf_r_axis() for s in self.secondary_axis()]


def _axis_length(start: float, stop: float, step: float) -> int:
    return int(math.floor((stop - start) / step + 1e-9)) + 1


def _axis(start: float, stop: float, step: float) -> np.ndarray:
    return np.round(start + step * np.arange(_axis_length(start, stop, step)), 12)


@dataclass
class ScanRow:
    geometry: str
    kf_r: float
    secondary: float
    separations: Tuple[float, float, float]
    slater: Optional[Tuple[float, float, float]] = None
    a: Optional[float] = None
    b: Optional[float] = None
    c: Optional[float] = None
    eta: Optional[float] = None
    traces: Dict[str, float] = field(default_factory=dict)
    rotated: Dict[str, float] = field(default_factory=dict)  # rotation-minimized traces
    verdict: str = ""
    witness: str = ""
    ppt_flags: Optional[Tuple[bool, bool, bool]] = None
    negativities: Optional[Tuple[float, float, float]] = None
    purity_max: Optional[float] = None
    skipped: bool = False
    reason: str = ""

    def record(self) -> dict:
        """Flat mapping keyed by CSV column name."""
        out = {
            "geometry": self.geometry,
            "kf_r": float(self.kf_r),
            "secondary": float(self.secondary),
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "eta": self.eta,
            "verdict": self.verdict,
            "witness": self.witness,
            "purity_max": self.purity_max,
            "skipped": self.skipped,
            "reason": self.reason,
        }
        for name, x in zip(("x12", "x13", "x23"), self.separations):
            out[name] = float(x)
        for name, f in zip(("f12", "f13", "f23"), self.slater or (None,) * 3):
            out[name] = None if f is None else float(f)
        for k in range(3):
            out[f"ppt{k + 1}"] = None if self.ppt_flags is None else bool(self.ppt_flags[k])
            out[f"neg{k + 1}"] = None if self.negativities is None else float(self.negativities[k])
        for name, v in self.traces.items():
            out[f"trace_{name}"] = float(v)
        for name, v in self.rotated.items():
            out[f"rotmin_{name}"] = float(v)
        return out


@dataclass(frozen=True)
class _Task:
    index: int
    point: GeometryConfig
    witnesses: Tuple[str, ...]
    rotation: bool
    rotation_grid: int
    purity_samples: int
    refine_iterations: int
    seed: int


def evaluate_point(task: _Task) -> ScanRow:
    """Everything the scan reports for one geometry; depends only on the task."""
    g = task.point
    row = ScanRow(g.kind, g.kf_r, g.secondary, g.separations())
    try:
        coeffs = coefficients_from_geometry(g)
    except CoincidentParticlesError as e:
        logger.warning(f"Skipping {g.kind} kf_r={g.kf_r:.6g} secondary={g.secondary:.6g}: {e}")
        row.skipped, row.reason = True, "coincident"
        return row

    row.slater = coeffs.slater
    row.a, row.b, row.c, row.eta = coeffs.a, coeffs.b, coeffs.c, coeffs.eta
    try:
        verdict = classify(coeffs)
    except InvalidCoefficientsError as e:
        logger.warning(f"Skipping kf_r={g.kf_r:.6g} secondary={g.secondary:.6g}: {e}")
        row.skipped, row.reason = True, "invalid"
        return row

    row.traces = {name: verdict.values[name] for name in task.witnesses}
    row.verdict = verdict.detected_class.value
    row.witness = verdict.witness_name or ""
    row.ppt_flags = verdict.ppt_flags
    row.negativities = tuple(negativity(coeffs, party) for party in (1, 2, 3))

    if task.rotation:
        rho = build_rho3(coeffs)
        row.rotated = {
            name: minimize_over_rotations(PANEL_BY_NAME[name].operator(), rho, task.rotation_grid).value
            for name in task.witnesses
        }
    if task.purity_samples:
        row.purity_max = purity_bound_check(
            coeffs, task.purity_samples, task.seed + task.index, task.refine_iterations
        ).max_value

    logger.debug(f"Point {task.index}: ({row.a:.6f}, {row.b:.6f}, {row.c:.6f}) -> {row.verdict}")
    return row


# ---------------------------------------------------------------------------
# Summary
# ---------------------------------------------------------------------------

WINDOW_COLUMNS = ["count", "kf_r_min", "kf_r_max", "secondary_min", "secondary_max"]


@dataclass
class ScanSummary:
    """Per-condition extents of the grid points where the condition holds."""
    windows: pd.DataFrame
    total: int
    skipped: int
    p_min: float  # smallest pair weight over evaluated points

    def window(self, condition: str) -> Optional[Tuple[float, float, float, float]]:
        """(kf_r_min, kf_r_max, secondary_min, secondary_max), or None when empty."""
        if condition not in self.windows.index:
            return None
        entry = self.windows.loc[condition]
        if entry["count"] == 0:
            return None
        return tuple(float(entry[col]) for col in WINDOW_COLUMNS[1:])


def summarize(rows: Sequence[ScanRow], witnesses: Sequence[str]) -> ScanSummary:
    frame = pd.DataFrame([r.record() for r in rows if not r.skipped])
    conditions: Dict[str, pd.Series] = {}
    if not frame.empty:
        conditions["detected"] = frame["verdict"] != "none"
        for k in (1, 2, 3):
            conditions[f"ppt{k}"] = frame[f"ppt{k}"].astype(bool)
        conditions["ppt_entangled"] = conditions["detected"] & (
            conditions["ppt1"] | conditions["ppt2"] | conditions["ppt3"]
        )
        conditions["all_p_nonneg"] = frame[["a", "b", "c"]].min(axis=1) >= -VALIDITY_SLACK
        for name in witnesses:
            conditions[f"detect_{name}"] = frame[f"trace_{name}"] < DETECTION_THRESHOLD
            if f"rotmin_{name}" in frame:
                conditions[f"rotdetect_{name}"] = frame[f"rotmin_{name}"] < DETECTION_THRESHOLD

    records = {}
    for name, mask in conditions.items():
        hit = frame[mask]
        if hit.empty:
            records[name] = [0, np.nan, np.nan, np.nan, np.nan]
        else:
            records[name] = [
                int(len(hit)),
                hit["kf_r"].min(),
                hit["kf_r"].max(),
                hit["secondary"].min(),
                hit["secondary"].max(),
            ]
    windows = pd.DataFrame.from_dict(records, orient="index", columns=WINDOW_COLUMNS)
    p_min = float(frame[["a", "b", "c"]].min().min()) if not frame.empty else float("nan")
    return ScanSummary(windows=windows, total=len(rows), skipped=sum(r.skipped for r in rows), p_min=p_min)


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------

def run_scan(req: ScanRequest) -> Tuple[List[ScanRow], ScanSummary]:
    """
    Evaluate every grid point of a request.

    Rows come back in grid order whatever the worker count, and are written to
    req.output when it is set.
    """
    tasks = [
        _Task(i, g, tuple(req.witnesses), req.rotation, req.rotation_grid,
              req.purity_samples, req.refine_iterations, req.seed)
        for i, g in enumerate(req.grid())
    ]
    logger.info(f"Scanning {len(tasks)} {req.geometry} points with {req.workers} worker(s)")

    if req.workers == 1:
        rows = [evaluate_point(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=req.workers) as pool:
            rows = list(pool.map(evaluate_point, tasks, chunksize=max(1, len(tasks) // (4 * req.workers))))

    summary = summarize(rows, req.witnesses)
    logger.info(f"Scan finished: {summary.total} points, {summary.skipped} skipped")
    if req.output is not None:
        emit_csv(rows, req.output, req.witnesses, req.rotation)
    return rows, summary


def emit_csv(
    rows: Sequence[ScanRow],
    path,
    witnesses: Sequence[str] = tuple(spec.name for spec in PANEL),
    rotation: bool = False,
) -> Path:
    """Header plus one line per row; identical rows give identical bytes."""
    columns = ScanStorage.columns_for(witnesses, rotation)
    with ScanStorage(path, columns) as storage:
        for row in rows:
            storage.write(row.record())
    return storage.path
