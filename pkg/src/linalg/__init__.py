"""
Linear algebra for three-qubit operators.

This module provides:
- Kronecker helpers and Pauli constants
- Partial transpose per party
- Cyclic complex Jacobi eigensolver
- Trace norm and real expectation values
"""
from .jacobi import (
    DimensionError,
    MatrixError,
    Spectrum,
    hermitian_eigs,
    is_hermitian,
)
from .operators import (
    ComplexMatrix,
    I2,
    SX,
    SY,
    SZ,
    PAULIS,
    embed,
    embed_pair,
    expectation,
    kron,
    kron_all,
    partial_transpose,
    projector,
    pure_expectation,
    trace_norm,
)

__all__ = [
    # Errors
    "DimensionError",
    "MatrixError",
    # Eigen-decomposition
    "Spectrum",
    "hermitian_eigs",
    "is_hermitian",
    # Operators
    "ComplexMatrix",
    "I2",
    "SX",
    "SY",
    "SZ",
    "PAULIS",
    "embed",
    "embed_pair",
    "expectation",
    "kron",
    "kron_all",
    "partial_transpose",
    "projector",
    "pure_expectation",
    "trace_norm",
]
