"""
Scan pipeline for Tool_fermiwit.

Provides:
- ScanRequest / run_scan: geometry sweeps with witness, PPT and purity data
- ScanStorage: thread-safe CSV writer with 12-digit floats
"""
from .storage import ScanStorage, format_cell
from .scanner import ScanRequest, ScanRow, ScanSummary, emit_csv, evaluate_point, run_scan

__all__ = [
    "ScanStorage",
    "format_cell",
    "ScanRequest",
    "ScanRow",
    "ScanSummary",
    "emit_csv",
    "evaluate_point",
    "run_scan",
]
