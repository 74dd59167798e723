"""Knot vectors, knot spans and tensor-grid indexing.

Conventions used everywhere in the package:

* knots are indexed from 0 (``u_0 ... u_m``);
* knot comparisons are exact floating-point comparisons;
* multi-indices are linearized with the first parametric direction running
  fastest.
"""

from __future__ import annotations

import bisect
import math
from collections.abc import Iterable, Sequence

import numpy as np

from .errors import SplineError


class KnotVector(Sequence[float]):
    """Immutable, non-decreasing sequence of knots.

    Use :func:`validate_knot_vector` (or the constructor, which calls it) to
    build one; the clamped condition is checked later, by the spline that
    owns the knot vector, because it depends on the degree.
    """

    __slots__ = ("_knots",)

    def __init__(self, knots: Iterable[float]):
        values = tuple(float(k) for k in knots)
        if len(values) < 2:
            raise SplineError(f"knot vector needs at least 2 knots, got {len(values)}")
        for k in values:
            if not math.isfinite(k):
                raise SplineError(f"knot vector contains a non-finite value: {k!r}")
        for i in range(len(values) - 1):
            if values[i + 1] < values[i]:
                raise SplineError(
                    f"knot vector is decreasing at index {i}: {values[i]!r} > {values[i + 1]!r}"
                )
        self._knots = values

    def __getitem__(self, index):
        return self._knots[index]

    def __len__(self) -> int:
        return len(self._knots)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, KnotVector):
            return self._knots == other._knots
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._knots)

    def __repr__(self) -> str:
        return f"KnotVector({list(self._knots)!r})"

    @property
    def knots(self) -> tuple[float, ...]:
        return self._knots

    @property
    def m(self) -> int:
        """Index of the last knot."""
        return len(self._knots) - 1

    @property
    def first(self) -> float:
        return self._knots[0]

    @property
    def last(self) -> float:
        return self._knots[-1]

    def to_array(self) -> np.ndarray:
        return np.array(self._knots, dtype=float)

    def distinct(self) -> list[float]:
        """Distinct knot values in increasing order."""
        out: list[float] = []
        for k in self._knots:
            if not out or k != out[-1]:
                out.append(k)
        return out

    def nonzero_spans(self) -> list[int]:
        """Indices ``i`` with ``u_i < u_{i+1}``."""
        return [i for i in range(self.m) if self._knots[i] < self._knots[i + 1]]

    def is_clamped(self, degree: int) -> bool:
        """First and last knot repeated exactly ``degree + 1`` times."""
        p1 = degree + 1
        if len(self._knots) < 2 * p1:
            return False
        return (
            knot_multiplicity(self, self.first) == p1
            and knot_multiplicity(self, self.last) == p1
            and self.first < self.last
        )

    def contains(self, u: float) -> bool:
        return self.first <= u <= self.last

    def inserted(self, u: float, times: int = 1) -> KnotVector:
        pos = bisect.bisect_right(self._knots, u)
        return KnotVector(self._knots[:pos] + (float(u),) * times + self._knots[pos:])


def validate_knot_vector(knots: Iterable[float]) -> KnotVector:
    """Check monotonicity/finiteness/length and return a :class:`KnotVector`."""
    if isinstance(knots, KnotVector):
        return knots
    return KnotVector(knots)


def find_knot_span(kv: KnotVector, u: float, degree: int | None = None) -> int:
    """Index ``i`` of the knot span containing ``u``.

    Spans are half-open ``[u_i, u_{i+1})`` except the last non-zero span, which
    also contains the last knot. At repeated knots the span starting at the
    last occurrence of the value is returned. When ``degree`` is given the
    result is restricted to ``degree <= i <= m - degree - 1``, the range that
    carries non-zero basis functions of a clamped spline.
    """
    u = float(u)
    knots = kv.knots
    if not math.isfinite(u) or u < knots[0] or u > knots[-1]:
        raise SplineError(f"parametric coordinate {u!r} outside [{knots[0]!r}, {knots[-1]!r}]")
    if u == knots[-1]:
        # closed-right rule: last span with u_i < u_{i+1}
        i = bisect.bisect_left(knots, u) - 1
        if i < 0:
            raise SplineError("knot vector has no non-zero span")
    else:
        i = bisect.bisect_right(knots, u) - 1
    if degree is not None:
        i = min(max(i, degree), kv.m - degree - 1)
    return i


def knot_multiplicity(kv: Sequence[float], u: float) -> int:
    """Number of knots exactly equal to ``u``."""
    knots = kv.knots if isinstance(kv, KnotVector) else tuple(kv)
    return bisect.bisect_right(knots, u) - bisect.bisect_left(knots, u)


class TensorGrid:
    """Sizes of a tensor-product index set, first direction fastest."""

    __slots__ = ("sizes",)

    def __init__(self, sizes: Iterable[int]):
        sizes = tuple(int(s) for s in sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise SplineError(f"grid sizes must be positive integers, got {sizes}")
        self.sizes = sizes

    def __len__(self) -> int:
        return math.prod(self.sizes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TensorGrid) and self.sizes == other.sizes

    def __repr__(self) -> str:
        return f"TensorGrid({self.sizes})"

    @property
    def dim(self) -> int:
        return len(self.sizes)

    def linearize(self, multi_index: Sequence[int]) -> int:
        if len(multi_index) != len(self.sizes):
            raise SplineError(f"expected {len(self.sizes)} indices, got {len(multi_index)}")
        linear = 0
        stride = 1
        for i, size in zip(multi_index, self.sizes):
            if not 0 <= i < size:
                raise SplineError(f"index {tuple(multi_index)} out of range for sizes {self.sizes}")
            linear += int(i) * stride
            stride *= size
        return linear

    def delinearize(self, linear: int) -> tuple[int, ...]:
        if not 0 <= linear < len(self):
            raise SplineError(f"linear index {linear} out of range 0..{len(self) - 1}")
        out = []
        for size in self.sizes:
            linear, i = divmod(linear, size)
            out.append(i)
        return tuple(out)

    def __iter__(self):
        """Multi-indices in linear order."""
        for linear in range(len(self)):
            yield self.delinearize(linear)


def linearize(sizes: Sequence[int], multi_index: Sequence[int]) -> int:
    return TensorGrid(sizes).linearize(multi_index)


def delinearize(sizes: Sequence[int], linear: int) -> tuple[int, ...]:
    return TensorGrid(sizes).delinearize(linear)


def grid_from_linear(values: np.ndarray, sizes: Sequence[int]) -> np.ndarray:
    """Reshape ``(prod(sizes), C)`` rows into a ``(*sizes, C)`` grid."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    count, comps = values.shape
    if count != math.prod(sizes):
        raise SplineError(f"expected {math.prod(sizes)} entries for grid {tuple(sizes)}, got {count}")
    cols = [values[:, c].reshape(tuple(sizes), order="F") for c in range(comps)]
    return np.stack(cols, axis=-1)


def linear_from_grid(grid: np.ndarray) -> np.ndarray:
    """Inverse of :func:`grid_from_linear`: ``(*sizes, C)`` to ``(prod, C)``."""
    sizes = grid.shape[:-1]
    comps = grid.shape[-1]
    return np.stack(
        [grid[..., c].reshape(-1, order="F") for c in range(comps)], axis=-1
    ).reshape(math.prod(sizes), comps)
