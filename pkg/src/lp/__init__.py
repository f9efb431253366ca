"""
Linear programming for witness synthesis.

This module provides:
- Two-phase simplex with Bland's rule
- Vertex enumeration of bounded halfspace polytopes
- Feasible regions and parametric constraint tables per witness family
- Witness validation and empirical bound checks
"""
from .simplex import (
    InfeasibleError,
    LinearProgram,
    LPSolution,
    UnboundedError,
    is_feasible,
    simplex_minimize,
)
from .polytope import (
    SYSTEMS,
    Polytope,
    UnknownSystemError,
    enumerate_vertices,
    feasible_region,
    published_vertices,
)
from .constraints import (
    ConstraintRow,
    constraint_set,
    derived_constraints,
    dump_constraints,
    load_constraints,
    region_for,
)
from .validation import (
    COMBOS,
    BoundReport,
    ValidationReport,
    get_combo,
    validate_witness,
    verify_bound,
)

__all__ = [
    # Simplex
    "InfeasibleError",
    "LinearProgram",
    "LPSolution",
    "UnboundedError",
    "is_feasible",
    "simplex_minimize",
    # Regions
    "SYSTEMS",
    "Polytope",
    "UnknownSystemError",
    "enumerate_vertices",
    "feasible_region",
    "published_vertices",
    # Constraint tables
    "ConstraintRow",
    "constraint_set",
    "derived_constraints",
    "dump_constraints",
    "load_constraints",
    "region_for",
    # Validation
    "COMBOS",
    "BoundReport",
    "ValidationReport",
    "get_combo",
    "validate_witness",
    "verify_bound",
]
