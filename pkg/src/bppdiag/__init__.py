"""Diagonal sums of uniformly random boxed plane partitions: exact moments,
closed forms, generating functions, perfect sampling and rendering."""
from .core import (
    BoxDims,
    BppError,
    CapExceeded,
    BudgetExceeded,
    CenteredSums,
    ContourSet,
    DiagonalSums,
    IndexOutOfRange,
    InvalidPartition,
    MonotonicityViolation,
    OutOfRange,
    PlanePartition,
    ShapeMismatch,
    centered_sums,
    complement,
    contour_heights,
    diagonal_sums,
    transpose,
    validate,
)
from .formulas import (
    covariance_diagonal_sums,
    covariance_ratio_form,
    macmahon_count,
    mean_diagonal_sum,
    quadratic_sum_identity,
    total_sum_variance,
)
from .qpoly import QPolynomial

__version__ = "0.1.0"


def schema(name: str) -> dict:
    """Load one of the shipped JSON schemas by file stem."""
    import json
    from importlib.resources import files

    return json.loads(files(__package__).joinpath("schemas", f"{name}.json").read_text())
