"""B-spline basis functions as a recursive tree of objects.

Every ``N_{i,p}`` with ``p > 0`` owns its two lower-degree children
``N_{i,p-1}`` and ``N_{i+1,p-1}`` together with the two inverted
denominators of the Cox-de Boor recursion, which depend only on the knot
vector and are therefore computed once at construction.  A zero denominator
is stored as an inverse of 0, which realizes the ``0/0 := 0`` convention.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

from .core import KnotVector
from .errors import SplineError


def inv_with_pos_zero_denom(denom: float) -> float:
    """``1/denom`` for a positive denominator, ``0.0`` for a zero one."""
    return 0.0 if denom == 0.0 else 1.0 / denom


class BasisFunction(ABC):
    """Common part of all basis functions: degree and support.

    The support is ``[start_knot, end_knot)``, closed on the right when
    ``end_knot`` is the last knot of the knot vector.
    """

    __slots__ = ("degree", "start_knot", "end_knot", "end_knot_is_last_knot")

    def __init__(self, kv: KnotVector, degree: int, start_support: int):
        if degree < 0:
            raise SplineError(f"degree must be non-negative, got {degree}")
        if start_support < 0 or start_support + degree + 1 > kv.m:
            raise SplineError(
                f"support of N_{{{start_support},{degree}}} exceeds knot vector with m={kv.m}"
            )
        self.degree = degree
        self.start_knot = kv[start_support]
        self.end_knot = kv[start_support + degree + 1]
        self.end_knot_is_last_knot = self.end_knot == kv.last

    def is_coord_in_support(self, pc: float) -> bool:
        if self.end_knot_is_last_knot:
            return self.start_knot <= pc <= self.end_knot
        return self.start_knot <= pc < self.end_knot

    def eval(self, pc: float) -> float:
        return self._eval_on_support(pc) if self.is_coord_in_support(pc) else 0.0

    def eval_derivative(self, pc: float, order: int) -> float:
        if order < 0:
            raise SplineError(f"derivative order must be non-negative, got {order}")
        if order == 0:
            return self.eval(pc)
        return self._eval_derivative_on_support(pc, order) if self.is_coord_in_support(pc) else 0.0

    def __call__(self, pc: float, order: int = 0) -> float:
        return self.eval_derivative(pc, order)

    @abstractmethod
    def _eval_on_support(self, pc: float) -> float: ...

    @abstractmethod
    def _eval_derivative_on_support(self, pc: float, order: int) -> float: ...


class ZeroDegreeBasisFunction(BasisFunction):
    """Step function equal to one on a single knot span."""

    __slots__ = ()

    def __init__(self, kv: KnotVector, start_support: int):
        super().__init__(kv, 0, start_support)

    def _eval_on_support(self, pc: float) -> float:
        return 1.0

    def _eval_derivative_on_support(self, pc: float, order: int) -> float:
        return 0.0


class RecursiveBasisFunction(BasisFunction):
    """Degree ``p > 0`` function combining two children of degree ``p - 1``."""

    __slots__ = ("left_denom_inv", "right_denom_inv", "left_lower_degree", "right_lower_degree")

    def __init__(self, kv: KnotVector, degree: int, start_support: int):
        if degree < 1:
            raise SplineError("recursive basis functions need degree >= 1")
        super().__init__(kv, degree, start_support)
        i, p = start_support, degree
        self.left_denom_inv = inv_with_pos_zero_denom(kv[i + p] - kv[i])
        self.right_denom_inv = inv_with_pos_zero_denom(kv[i + p + 1] - kv[i + 1])
        self.left_lower_degree = create_basis_function(kv, i, p - 1)
        self.right_lower_degree = create_basis_function(kv, i + 1, p - 1)

    def _left_quotient(self, pc: float) -> float:
        return (pc - self.start_knot) * self.left_denom_inv

    def _right_quotient(self, pc: float) -> float:
        return (self.end_knot - pc) * self.right_denom_inv

    def _eval_on_support(self, pc: float) -> float:
        return (
            self._left_quotient(pc) * self.left_lower_degree.eval(pc)
            + self._right_quotient(pc) * self.right_lower_degree.eval(pc)
        )

    def _eval_derivative_on_support(self, pc: float, order: int) -> float:
        # Leibniz rule on the two linear factors of the recursion
        left, right = self.left_lower_degree, self.right_lower_degree
        return self.left_denom_inv * (
            (pc - self.start_knot) * left.eval_derivative(pc, order)
            + order * left.eval_derivative(pc, order - 1)
        ) + self.right_denom_inv * (
            (self.end_knot - pc) * right.eval_derivative(pc, order)
            - order * right.eval_derivative(pc, order - 1)
        )


def create_basis_function(kv: KnotVector, start_support: int, degree: int) -> BasisFunction:
    """Build the tree for ``N_{start_support, degree}`` over ``kv``."""
    if degree == 0:
        return ZeroDegreeBasisFunction(kv, start_support)
    return RecursiveBasisFunction(kv, degree, start_support)


def eval_basis(bf: BasisFunction, pc: float) -> float:
    return bf.eval(pc)


def eval_basis_derivative(bf: BasisFunction, pc: float, order: int) -> float:
    return bf.eval_derivative(pc, order)
