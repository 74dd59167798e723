"""Tensor-product B-splines and NURBS behind one interface.

Control points are stored as a grid of shape ``(n_0, ..., n_{D-1}, N)``;
``Spline.control_points_linear()`` flattens it with the first parametric
direction running fastest, which is the order every file codec uses.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np

from .basis import BasisFunction, create_basis_function
from .core import KnotVector, find_knot_span, grid_from_linear, linear_from_grid, validate_knot_vector
from .errors import SplineError

MAX_PARAMETRIC_DIM = 4


class ParameterSpace:
    """Knot vectors, degrees and basis-function trees of all directions."""

    def __init__(self, knot_vectors: Sequence, degrees: Sequence[int]):
        kvs = tuple(validate_knot_vector(kv) for kv in knot_vectors)
        degs = tuple(int(p) for p in degrees)
        if not 1 <= len(kvs) <= MAX_PARAMETRIC_DIM:
            raise SplineError(
                f"parametric dimension must be 1..{MAX_PARAMETRIC_DIM}, got {len(kvs)}"
            )
        if len(degs) != len(kvs):
            raise SplineError(f"{len(kvs)} knot vectors but {len(degs)} degrees")
        for d, (kv, p) in enumerate(zip(kvs, degs)):
            if p < 0:
                raise SplineError(f"direction {d}: degree must be non-negative, got {p}")
            if not kv.is_clamped(p):
                raise SplineError(
                    f"direction {d}: knot vector is not clamped for degree {p} "
                    f"(end knots must appear exactly {p + 1} times)"
                )
        self.knot_vectors = kvs
        self.degrees = degs
        self.basis: tuple[tuple[BasisFunction, ...], ...] = tuple(
            tuple(create_basis_function(kv, i, p) for i in range(len(kv) - p - 1))
            for kv, p in zip(kvs, degs)
        )

    @property
    def dim(self) -> int:
        return len(self.knot_vectors)

    @property
    def sizes(self) -> tuple[int, ...]:
        """Number of control points per direction (``n_d + 1 = m_d - p_d``)."""
        return tuple(len(kv) - p - 1 for kv, p in zip(self.knot_vectors, self.degrees))

    def check_coordinate(self, pc: Sequence[float]) -> tuple[float, ...]:
        pc = tuple(float(u) for u in np.atleast_1d(pc))
        if len(pc) != self.dim:
            raise SplineError(f"expected {self.dim} parametric coordinates, got {len(pc)}")
        for d, (u, kv) in enumerate(zip(pc, self.knot_vectors)):
            if not (math.isfinite(u) and kv.first <= u <= kv.last):
                raise SplineError(
                    f"direction {d}: parametric coordinate {u!r} outside [{kv.first!r}, {kv.last!r}]"
                )
        return pc

    def span(self, direction: int, u: float) -> int:
        return find_knot_span(self.knot_vectors[direction], u, self.degrees[direction])

    def nonzero_basis(self, direction: int, u: float, max_order: int = 0) -> tuple[int, np.ndarray]:
        """Values and derivatives of the basis functions that may be non-zero at ``u``.

        Returns ``(first, table)`` where ``table[k, j]`` is the ``k``-th
        derivative of ``N_{first + j, p}`` at ``u``.
        """
        p = self.degrees[direction]
        first = self.span(direction, u) - p
        funcs = self.basis[direction][first : first + p + 1]
        table = np.array(
            [[bf.eval_derivative(u, k) for bf in funcs] for k in range(max_order + 1)]
        )
        return first, table

    def basis_matrix(self, direction: int, us: Sequence[float], order: int = 0) -> np.ndarray:
        """Dense ``(len(us), n_d + 1)`` matrix of ``order``-th basis derivatives."""
        out = np.zeros((len(us), self.sizes[direction]))
        for row, u in enumerate(us):
            first, table = self.nonzero_basis(direction, float(u), order)
            out[row, first : first + table.shape[1]] = table[order]
        return out

    def element_spans(self, direction: int) -> list[int]:
        """Knot-span indices of the non-zero spans (elements) in one direction."""
        return self.knot_vectors[direction].nonzero_spans()

    def element_counts(self) -> tuple[int, ...]:
        return tuple(len(self.element_spans(d)) for d in range(self.dim))

    def element_index(self, direction: int, u: float) -> int:
        """Position of the element containing ``u`` among the direction's elements."""
        span = find_knot_span(self.knot_vectors[direction], u)
        return self.element_spans(direction).index(span)


def _contract(block: np.ndarray, vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Contract the leading ``len(vectors)`` axes of ``block`` with ``vectors``."""
    out = block
    for v in vectors:
        out = np.tensordot(v, out, axes=(0, 0))
    return out


def _as_grid(points, sizes: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.shape[:-1] == sizes and arr.ndim == len(sizes) + 1:
        return arr.copy()
    if arr.ndim == 2:
        return grid_from_linear(arr, sizes)
    if arr.ndim == 1 and len(sizes) == 1:
        return arr.reshape(-1, 1) if arr.shape[0] == sizes[0] else grid_from_linear(arr, sizes)
    raise SplineError(
        f"control points of shape {arr.shape} do not match control grid {sizes}"
    )


class Spline:
    """Interface shared by :class:`BSpline` and :class:`Nurbs`."""

    rational = False

    def __init__(self, knot_vectors, degrees, control_points, weights=None):
        self.parameter_space = ParameterSpace(knot_vectors, degrees)
        sizes = self.parameter_space.sizes
        try:
            grid = _as_grid(control_points, sizes)
        except SplineError as exc:
            raise SplineError(
                f"control point count does not match knot vectors/degrees "
                f"(need {math.prod(sizes)} points on grid {sizes}): {exc}"
            ) from None
        if grid.shape[-1] < 1:
            raise SplineError("control points must have at least one coordinate")
        if not np.all(np.isfinite(grid)):
            raise SplineError("control points must be finite")
        grid.setflags(write=False)
        self._points = grid
        self._weights = None
        if self.rational:
            w = np.asarray(weights, dtype=float)
            if w.shape != sizes:
                if w.size != math.prod(sizes):
                    raise SplineError(
                        f"expected {math.prod(sizes)} weights for grid {sizes}, got {w.size}"
                    )
                w = w.reshape(-1).reshape(sizes, order="F")
            else:
                w = w.copy()
            if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
                raise SplineError("NURBS weights must be finite and positive")
            w.setflags(write=False)
            self._weights = w
        elif weights is not None:
            raise SplineError("B-splines do not take weights; use Nurbs")

    # -- data access ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.parameter_space.dim

    @property
    def space_dim(self) -> int:
        return self._points.shape[-1]

    @property
    def degrees(self) -> tuple[int, ...]:
        return self.parameter_space.degrees

    @property
    def knot_vectors(self) -> tuple[KnotVector, ...]:
        return self.parameter_space.knot_vectors

    @property
    def sizes(self) -> tuple[int, ...]:
        return self.parameter_space.sizes

    @property
    def control_points(self) -> np.ndarray:
        """Read-only grid of shape ``(*sizes, space_dim)``."""
        return self._points

    @property
    def weights(self) -> np.ndarray | None:
        return self._weights

    @property
    def n_control_points(self) -> int:
        return math.prod(self.sizes)

    @property
    def n_elements(self) -> int:
        return math.prod(self.parameter_space.element_counts())

    def control_points_linear(self) -> np.ndarray:
        return linear_from_grid(self._points)

    def weights_linear(self) -> np.ndarray | None:
        if self._weights is None:
            return None
        return self._weights.reshape(-1, order="F").copy()

    def weight_grid(self) -> np.ndarray:
        """Weights, or ones for a B-spline."""
        return self._weights if self._weights is not None else np.ones(self.sizes)

    def homogeneous_grid(self, extra: np.ndarray | None = None) -> np.ndarray:
        """Grid of ``(w*P, [w*extra,] w)``, shape ``(*sizes, N [+k] + 1)``."""
        w = self.weight_grid()[..., None]
        parts = [self._points * w]
        if extra is not None:
            parts.append(np.asarray(extra, dtype=float).reshape(self.sizes + (-1,)) * w)
        parts.append(w)
        return np.concatenate(parts, axis=-1)

    @classmethod
    def from_homogeneous(cls, knot_vectors, degrees, grid: np.ndarray, rational: bool) -> Spline:
        """Inverse of :meth:`homogeneous_grid` (without extra components)."""
        w = grid[..., -1]
        points = grid[..., :-1] / w[..., None]
        if rational:
            return Nurbs(knot_vectors, degrees, points, w)
        return BSpline(knot_vectors, degrees, points)

    def with_control_points(self, points) -> Spline:
        """Same parameter space and weights, new control points."""
        if self.rational:
            return Nurbs(self.knot_vectors, self.degrees, points, self._weights)
        return BSpline(self.knot_vectors, self.degrees, points)

    # -- evaluation ----------------------------------------------------------

    def _output_dims(self, output_dims) -> list[int]:
        if output_dims is None:
            return list(range(self.space_dim))
        dims = [int(d) for d in np.atleast_1d(output_dims)]
        for d in dims:
            if not 0 <= d < self.space_dim:
                raise SplineError(f"output dimension {d} outside 0..{self.space_dim - 1}")
        return dims

    def _local(self, pc: Sequence[float], orders: Sequence[int]):
        ps = self.parameter_space
        firsts, tables = [], []
        for d, u in enumerate(pc):
            first, table = ps.nonzero_basis(d, u, orders[d])
            firsts.append(first)
            tables.append(table)
        index = tuple(slice(f, f + p + 1) for f, p in zip(firsts, self.degrees))
        return index, tables

    def evaluate(self, pc: Sequence[float], output_dims=None) -> np.ndarray:
        """Physical coordinates (selected by ``output_dims``) at ``pc``."""
        return self.evaluate_derivative(pc, [0] * self.dim, output_dims)

    def evaluate_derivative(self, pc: Sequence[float], orders: Sequence[int], output_dims=None) -> np.ndarray:
        pc = self.parameter_space.check_coordinate(pc)
        orders = [int(k) for k in orders]
        if len(orders) != self.dim or any(k < 0 for k in orders):
            raise SplineError(f"need {self.dim} non-negative derivative orders, got {orders}")
        dims = self._output_dims(output_dims)
        return self._evaluate(pc, orders)[dims]

    def _evaluate(self, pc, orders) -> np.ndarray:
        index, tables = self._local(pc, orders)
        return _contract(self._points[index], [t[k] for t, k in zip(tables, orders)])

    def sample(self, params: Sequence[Sequence[float]], extra: np.ndarray | None = None) -> np.ndarray:
        """Evaluate on the tensor grid ``params[0] x params[1] x ...``.

        Returns ``(prod(len(params[d])), N [+k])`` rows, first direction
        fastest.  ``extra`` holds per-control-point scalars (``(n_cp, k)`` in
        linear order) interpolated with the same (rational) basis.
        """
        if len(params) != self.dim:
            raise SplineError(f"need {self.dim} parameter lists, got {len(params)}")
        ps = self.parameter_space
        mats = [ps.basis_matrix(d, us) for d, us in enumerate(params)]
        ext = None if extra is None else grid_from_linear(np.asarray(extra, float), self.sizes)
        h = self.homogeneous_grid(ext)
        h = np.moveaxis(h, -1, 0)
        for m in mats:
            h = np.tensordot(h, m, axes=([1], [1]))
        comps = h.shape[0]
        rows = h.reshape(comps, -1, order="F").T
        return rows[:, :-1] / rows[:, -1:]

    # -- structure -----------------------------------------------------------

    def extract(self, direction: int, value: float, extra: np.ndarray | None = None):
        """Iso-parametric sub-spline with coordinate ``direction`` fixed to ``value``.

        Returns ``(spline, extra_values)``; the sub-spline is rational exactly
        when this spline is.  ``extra`` is interpolated consistently.
        """
        if self.dim < 2:
            raise SplineError("cannot extract a sub-spline from a curve")
        if not 0 <= direction < self.dim:
            raise SplineError(f"direction {direction} outside 0..{self.dim - 1}")
        kv = self.knot_vectors[direction]
        if not kv.first <= value <= kv.last:
            raise SplineError(f"value {value!r} outside [{kv.first!r}, {kv.last!r}]")
        vec = self.parameter_space.basis_matrix(direction, [value])[0]
        ext = None if extra is None else grid_from_linear(np.asarray(extra, float), self.sizes)
        h = np.tensordot(vec, np.moveaxis(self.homogeneous_grid(ext), direction, 0), axes=(0, 0))
        kvs = [k for d, k in enumerate(self.knot_vectors) if d != direction]
        degs = [p for d, p in enumerate(self.degrees) if d != direction]
        w = h[..., -1]
        coords = h[..., :-1] / w[..., None]
        n = self.space_dim
        points = coords[..., :n]
        sub = Nurbs(kvs, degs, points, w) if self.rational else BSpline(kvs, degs, points)
        extra_out = None if extra is None else linear_from_grid(coords[..., n:])
        return sub, extra_out

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(dim={self.dim}, space_dim={self.space_dim}, "
            f"degrees={self.degrees}, sizes={self.sizes})"
        )


class BSpline(Spline):
    """Polynomial tensor-product B-spline."""

    def __init__(self, knot_vectors, degrees, control_points):
        super().__init__(knot_vectors, degrees, control_points)


class Nurbs(Spline):
    """Rational tensor-product B-spline with positive weights."""

    rational = True

    def __init__(self, knot_vectors, degrees, control_points, weights):
        if weights is None:
            raise SplineError("NURBS need weights")
        super().__init__(knot_vectors, degrees, control_points, weights)

    def _evaluate(self, pc, orders) -> np.ndarray:
        total = sum(orders)
        if total > 1:
            raise SplineError("NURBS derivatives are supported up to total order 1")
        index, tables = self._local(pc, [1 if k else 0 for k in orders])
        block = self.homogeneous_grid()[index]
        h = _contract(block, [t[0] for t in tables])
        point = h[:-1] / h[-1]
        if total == 0:
            return point
        hd = _contract(block, [t[k] for t, k in zip(tables, orders)])
        return (hd[:-1] - point * hd[-1]) / h[-1]


def make_spline(knot_vectors, degrees, control_points, weights=None) -> Spline:
    """BSpline when ``weights`` is None, otherwise Nurbs."""
    if weights is None:
        return BSpline(knot_vectors, degrees, control_points)
    return Nurbs(knot_vectors, degrees, control_points, weights)


def same_spline(a: Spline, b: Spline, atol: float = 0.0) -> bool:
    """Structural equality: type, degrees, knots and control data within ``atol``."""
    if type(a) is not type(b) or a.degrees != b.degrees or a.sizes != b.sizes:
        return False
    if a.space_dim != b.space_dim:
        return False
    for ka, kb in zip(a.knot_vectors, b.knot_vectors):
        if not np.allclose(ka.to_array(), kb.to_array(), rtol=0.0, atol=atol):
            return False
    if not np.allclose(a.control_points, b.control_points, rtol=0.0, atol=atol):
        return False
    if a.rational and not np.allclose(a.weights, b.weights, rtol=0.0, atol=atol):
        return False
    return True
