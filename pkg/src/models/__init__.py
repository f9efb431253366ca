"""
Three-fermion density matrix and entanglement witnesses.

This module provides:
- Pure-state constructors for the W and GHZ classes, samplers and refinement
- The NIFG reduced density matrix rho3, its spectrum and PPT conditions
- Spin-chain, GHZ-projector and stabilizer witnesses with closed-form traces
- Local SU(2) rotations and the rotation search
"""
from .states import (
    GhzParams,
    LocalSU2,
    NormalizationError,
    PureState,
    WParams,
    generic_ghz,
    generic_w,
    refine_maximum,
    sample_biseparable,
    sample_w_mixed,
    singlet_projector,
    spin_product,
    w_basis_states,
    w_class_exhibit,
    w_pair_expectations,
    w_projector_expectations,
    w_stabilizer_expectations,
)
from .nifg import (
    CoincidentParticlesError,
    GeometryConfig,
    InvalidCoefficientsError,
    NifgCoefficients,
    build_rho3,
    coefficients_from_geometry,
    coefficients_from_slater,
    entanglement_radius,
    entanglement_radius_diagnostics,
    negativity,
    partial_transpose_eigenvalues,
    ppt_condition,
    rho3_eigenvalues,
    slater_factor,
    validity,
)
from .rotations import (
    RotationSearch,
    minimize_over_rotations,
    rotated_expectation,
    uniform_rotation,
)
from .witnesses import (
    PANEL,
    PANEL_BY_NAME,
    ClassTarget,
    DetectedClass,
    Verdict,
    WitnessFamily,
    WitnessSpec,
    classify,
    purity_bound_check,
    w_chain_counterexample,
)

__all__ = [
    # States
    "GhzParams",
    "LocalSU2",
    "NormalizationError",
    "PureState",
    "WParams",
    "generic_ghz",
    "generic_w",
    "refine_maximum",
    "sample_biseparable",
    "sample_w_mixed",
    "singlet_projector",
    "spin_product",
    "w_basis_states",
    "w_class_exhibit",
    "w_pair_expectations",
    "w_projector_expectations",
    "w_stabilizer_expectations",
    # NIFG
    "CoincidentParticlesError",
    "GeometryConfig",
    "InvalidCoefficientsError",
    "NifgCoefficients",
    "build_rho3",
    "coefficients_from_geometry",
    "coefficients_from_slater",
    "entanglement_radius",
    "entanglement_radius_diagnostics",
    "negativity",
    "partial_transpose_eigenvalues",
    "ppt_condition",
    "rho3_eigenvalues",
    "slater_factor",
    "validity",
    # Rotations
    "RotationSearch",
    "minimize_over_rotations",
    "rotated_expectation",
    "uniform_rotation",
    # Witnesses
    "PANEL",
    "PANEL_BY_NAME",
    "ClassTarget",
    "DetectedClass",
    "Verdict",
    "WitnessFamily",
    "WitnessSpec",
    "classify",
    "purity_bound_check",
    "w_chain_counterexample",
]
