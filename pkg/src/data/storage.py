"""
CSV storage for scan rows.
"""
import csv
import logging
import threading
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

from ..config import CSV_FLOAT_FORMAT, OUTPUT_DIR

logger = logging.getLogger(__name__)


def format_cell(value) -> str:
    """Floats with 12 significant digits, bools as 0/1, None as an empty cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, CSV_FLOAT_FORMAT)
    return str(value)


class ScanStorage:
    """Thread-safe CSV writer for scan rows."""

    COLUMNS = [
        "geometry",
        "kf_r",
        "secondary",
        "x12",
        "x13",
        "x23",
        "f12",
        "f13",
        "f23",
        "a",
        "b",
        "c",
        "eta",
    ]
    VERDICT_COLUMNS = [
        "verdict",
        "witness",
        "ppt1",
        "ppt2",
        "ppt3",
        "neg1",
        "neg2",
        "neg3",
        "purity_max",
        "skipped",
        "reason",
    ]

    def __init__(self, path: Optional[Path] = None, columns: Optional[Sequence[str]] = None, append: bool = False):
        self.path = Path(path) if path is not None else OUTPUT_DIR / "scan.csv"
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.columns: List[str] = list(columns) if columns is not None else self.COLUMNS + self.VERDICT_COLUMNS
        self._lock = threading.Lock()
        self._rows = 0

        # Header only when the file is new or being replaced
        file_exists = append and self.path.exists()
        self._file_handle = open(self.path, "a" if append else "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file_handle, lineterminator="\n")
        if not file_exists:
            self._writer.writerow(self.columns)
            logger.info(f"Created new CSV file: {self.path}")

    @classmethod
    def columns_for(cls, witnesses: Iterable[str], rotation: bool) -> List[str]:
        witnesses = list(witnesses)
        traces = [f"trace_{name}" for name in witnesses]
        rotated = [f"rotmin_{name}" for name in witnesses] if rotation else []
        return cls.COLUMNS + traces + rotated + cls.VERDICT_COLUMNS

    def write(self, record: dict) -> None:
        """Write one row; keys missing from the record become empty cells."""
        with self._lock:
            if self._file_handle is None:
                raise ValueError(f"CSV file already closed: {self.path}")
            self._writer.writerow([format_cell(record.get(col)) for col in self.columns])
            self._file_handle.flush()
            self._rows += 1

    @property
    def rows_written(self) -> int:
        return self._rows

    def close(self) -> None:
        """Close the file."""
        if self._file_handle:
            self._file_handle.close()
            self._file_handle = None
            self._writer = None
            logger.info(f"Closed CSV file: {self.path} ({self._rows} rows)")

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
        return False
