"""B-spline and NURBS kernel: evaluation, manipulation, file interchange,
isogeometric Poisson solving and a small shape-optimization demo."""

from .basis import (
    BasisFunction,
    RecursiveBasisFunction,
    ZeroDegreeBasisFunction,
    create_basis_function,
    eval_basis,
    eval_basis_derivative,
)
from .core import (
    KnotVector,
    TensorGrid,
    delinearize,
    find_knot_span,
    knot_multiplicity,
    linearize,
    validate_knot_vector,
)
from .errors import FormatError, NumericalError, SplineError
from .manipulation import insert_knot, remove_knot, subdivide
from .spline import BSpline, Nurbs, ParameterSpace, Spline, make_spline, same_spline

__version__ = "0.1.0"

__all__ = [
    "BSpline",
    "BasisFunction",
    "FormatError",
    "KnotVector",
    "NumericalError",
    "Nurbs",
    "ParameterSpace",
    "RecursiveBasisFunction",
    "Spline",
    "SplineError",
    "TensorGrid",
    "ZeroDegreeBasisFunction",
    "create_basis_function",
    "delinearize",
    "eval_basis",
    "eval_basis_derivative",
    "find_knot_span",
    "insert_knot",
    "knot_multiplicity",
    "linearize",
    "make_spline",
    "remove_knot",
    "same_spline",
    "subdivide",
    "validate_knot_vector",
]
