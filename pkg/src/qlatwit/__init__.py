"""Exact simulation of collective-measurement entanglement criteria on small
spin chains and two-mode bosonic lattices."""

__version__ = "0.1.0"

from .qcore import (
    DensityMatrix,
    GroundState,
    HilbertSpace,
    LinearOperator,
    PureState,
    expectation,
    ground_state,
    matrix_exponential,
    negativity,
    partial_trace,
    pure_to_density,
    tensor_product,
    variance,
)

__all__ = [
    "__version__",
    "DensityMatrix",
    "GroundState",
    "HilbertSpace",
    "LinearOperator",
    "PureState",
    "expectation",
    "ground_state",
    "matrix_exponential",
    "negativity",
    "partial_trace",
    "pure_to_density",
    "tensor_product",
    "variance",
]
