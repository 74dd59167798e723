"""Isogeometric Galerkin solver for -Δu = f with u = 0 on the boundary.

The geometry spline's basis doubles as the solution basis.  Integrals are
computed element by element (tensor products of non-zero knot spans) with
Gauss-Legendre rules, and the reduced system is solved by a dense Cholesky
factorization.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .core import TensorGrid
from .errors import NumericalError, SplineError
from .io.model import SplineEntry, SplineFile
from .io.vtk import write_vtk
from .manipulation import insert_knot
from .spline import BSpline, Spline

MAX_GAUSS_POINTS = 10
MIN_ABS_DET = 1e-14


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.points)


def _legendre(n: int, x: float) -> tuple[float, float]:
    """``(P_n(x), P_n'(x))`` by the three-term recurrence."""
    p0, p1 = 1.0, x
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    return p1, n * (x * p1 - p0) / (x * x - 1.0)


def gauss_legendre(count: int) -> QuadratureRule:
    """Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration."""
    if not 1 <= count <= MAX_GAUSS_POINTS:
        raise SplineError(f"Gauss-Legendre point count must be 1..{MAX_GAUSS_POINTS}, got {count}")
    points, weights = np.empty(count), np.empty(count)
    for i in range(count):
        x = math.cos(math.pi * (i + 0.75) / (count + 0.5))
        for _ in range(100):
            value, slope = _legendre(count, x)
            step = value / slope
            x -= step
            if abs(step) <= 1e-16:
                break
        _, slope = _legendre(count, x)
        points[i] = x
        weights[i] = 2.0 / ((1.0 - x * x) * slope * slope)
    order = np.argsort(points)
    return QuadratureRule(points[order], weights[order])


@dataclass
class PoissonSystem:
    """Stiffness matrix and load vector over the control points listed in ``dofs``.

    ``boundary`` flags every control point (linear order) lying on the
    boundary of the control grid; ``min_abs_det`` is the smallest Jacobian
    determinant met during assembly.
    """

    stiffness: np.ndarray
    load: np.ndarray
    dofs: np.ndarray
    boundary: np.ndarray
    n_control_points: int
    min_abs_det: float

    @property
    def eliminated(self) -> bool:
        return len(self.dofs) < self.n_control_points


def boundary_mask(sizes: Sequence[int]) -> np.ndarray:
    """True for control points with any index equal to 0 or n_d."""
    grid = TensorGrid(sizes)
    return np.array(
        [any(i == 0 or i == n - 1 for i, n in zip(mi, sizes)) for mi in grid], dtype=bool
    )


def _tensor(tables: Sequence[np.ndarray]) -> np.ndarray:
    """Tensor product of per-direction (points, functions) tables, first direction fastest."""
    out = tables[0]
    for t in tables[1:]:
        out = np.einsum("qa,rb->rqba", out, t).reshape(out.shape[0] * t.shape[0], out.shape[1] * t.shape[1])
    return out


def assemble(geometry: Spline, source: float = 1.0, quad_per_direction: int | None = None) -> PoissonSystem:
    """Element-wise Gauss quadrature of the discrete weak form."""
    dim = geometry.dim
    if dim not in (1, 2, 3):
        raise SplineError(f"IGA assembly supports parametric dimension 1..3, got {dim}")
    if geometry.space_dim != dim:
        raise SplineError(
            f"IGA needs a {dim}-dimensional physical space for a {dim}-parametric geometry, got {geometry.space_dim}"
        )
    ps = geometry.parameter_space
    nq = quad_per_direction if quad_per_direction is not None else max(geometry.degrees) + 1
    rule = gauss_legendre(nq)

    # per direction and element: first basis index, values, derivatives, jacobian of [-1,1] map
    per_dir = []
    for d in range(dim):
        kv = geometry.knot_vectors[d]
        entries = []
        for span in ps.element_spans(d):
            a, b = kv[span], kv[span + 1]
            half = 0.5 * (b - a)
            us = 0.5 * (a + b) + half * rule.points
            tabs = [ps.nonzero_basis(d, u, 1) for u in us]
            first = tabs[0][0]
            entries.append(
                (first, np.array([t[1][0] for t in tabs]), np.array([t[1][1] for t in tabs]), half)
            )
        per_dir.append(entries)

    sizes = geometry.sizes
    n_cp = math.prod(sizes)
    points = geometry.control_points_linear()
    weights = geometry.weights_linear() if geometry.rational else None
    strides = np.cumprod((1,) + sizes[:-1])
    qw = _tensor([rule.weights[:, None]] * dim)[:, 0]
    stiffness = np.zeros((n_cp, n_cp))
    load = np.zeros(n_cp)
    min_det = math.inf

    for element in itertools.product(*[range(len(e)) for e in per_dir]):
        parts = [per_dir[d][e] for d, e in enumerate(element)]
        local_ranges = [np.arange(f, f + geometry.degrees[d] + 1) for d, (f, *_rest) in enumerate(parts)]
        mesh = np.meshgrid(*local_ranges, indexing="ij")
        idx = sum(m * s for m, s in zip(mesh, strides)).reshape(-1, order="F")
        vals = _tensor([p[1] for p in parts])
        ders = [
            _tensor([p[2] if k == d else p[1] for k, p in enumerate(parts)]) for d in range(dim)
        ]
        scale = math.prod(p[3] for p in parts)
        if weights is not None:
            w = weights[idx]
            wsum = vals @ w
            r = vals * w / wsum[:, None]
            dr = [(dn * w - r * (dn @ w)[:, None]) / wsum[:, None] for dn in ders]
        else:
            r, dr = vals, ders
        grad_ref = np.stack(dr, axis=-1)  # (q, a, d)
        jac = np.einsum("qad,ai->qid", grad_ref, points[idx])
        det = np.linalg.det(jac)
        if np.min(np.abs(det)) < MIN_ABS_DET:
            raise NumericalError(
                f"degenerate geometry: |det J| = {np.min(np.abs(det)):.3e} in element {element}"
            )
        min_det = min(min_det, float(np.min(np.abs(det))))
        grad = np.einsum("qad,qdi->qai", grad_ref, np.linalg.inv(jac))
        wdet = qw * np.abs(det) * scale
        stiffness[np.ix_(idx, idx)] += np.einsum("qai,qbi,q->ab", grad, grad, wdet)
        load[idx] += source * (r.T @ wdet)

    return PoissonSystem(stiffness, load, np.arange(n_cp), boundary_mask(sizes), n_cp, min_det)


def apply_homogeneous_dirichlet(system: PoissonSystem) -> PoissonSystem:
    """Drop the rows and columns of boundary control points."""
    keep = ~system.boundary[system.dofs]
    if not np.any(keep):
        raise SplineError("no free degrees of freedom remain after applying boundary conditions")
    dofs = system.dofs[keep]
    return PoissonSystem(
        system.stiffness[np.ix_(keep, keep)],
        system.load[keep],
        dofs,
        system.boundary,
        system.n_control_points,
        system.min_abs_det,
    )


def cholesky(matrix: np.ndarray) -> np.ndarray:
    """Lower-triangular ``L`` with ``L @ L.T == matrix`` (column-oriented)."""
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise SplineError(f"matrix must be square, got shape {a.shape}")
    scale = max(float(np.max(np.abs(a))), 1.0) if n else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * scale:
        raise NumericalError("matrix is not symmetric")
    low = np.zeros_like(a)
    for j in range(n):
        row = low[j, :j]
        pivot = a[j, j] - row @ row
        if not pivot > 0.0:
            raise NumericalError(f"matrix is not positive definite (pivot {pivot:.3e} at row {j})")
        low[j, j] = math.sqrt(pivot)
        low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ row) / low[j, j]
    return low


def solve_spd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` for a symmetric positive definite matrix."""
    low = cholesky(matrix)
    b = np.asarray(rhs, dtype=float)
    n = len(b)
    y = np.empty(n)
    for i in range(n):
        y[i] = (b[i] - low[i, :i] @ y[:i]) / low[i, i]
    x = np.empty(n)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - low[i + 1 :, i] @ x[i + 1 :]) / low[i, i]
    return x


@dataclass
class SolutionField:
    """Solution coefficients, one per geometry control point (linear order)."""

    geometry: Spline
    coefficients: np.ndarray

    def sample(self, params: Sequence[Sequence[float]]) -> np.ndarray:
        return self.geometry.sample(params, self.coefficients[:, None])[:, -1]

    def at(self, pc: Sequence[float]) -> float:
        return float(self.sample([[u] for u in pc])[0])


def solve_poisson(geometry: Spline, source: float = 1.0, quad_per_direction: int | None = None) -> SolutionField:
    system = apply_homogeneous_dirichlet(assemble(geometry, source, quad_per_direction))
    coeffs = np.zeros(system.n_control_points)
    coeffs[system.dofs] = solve_spd(system.stiffness, system.load)
    return SolutionField(geometry, coeffs)


def export_solution(
    field: SolutionField,
    resolution: Sequence[int],
    path: str | os.PathLike,
    slice_at: tuple[int, float] | None = None,
    name: str = "solution",
) -> None:
    """Write the field to VTK, optionally on the slice ``u_direction = value``.

    For a slice, ``resolution`` may list all directions (the fixed one is
    dropped) or only the remaining ones.
    """
    geometry = field.geometry
    values = field.coefficients
    res = list(resolution)
    if slice_at is not None:
        direction, value = slice_at
        if len(res) == geometry.dim:
            res.pop(direction)
        geometry, extra = geometry.extract(direction, value, values[:, None])
        values = extra[:, 0]
    entry = SplineEntry(geometry)
    entry.add_field(name, "control_point", values)
    write_vtk(SplineFile([entry]), [res], path)


def unit_box(dim: int, degree: int, elements: int) -> BSpline:
    """Identity-mapped ``[0, 1]^dim`` with ``elements`` uniform elements per direction.

    Starts from a single Bezier element with equally spaced control points
    and refines it by knot insertion.
    """
    if degree < 1:
        raise SplineError("unit_box needs degree >= 1")
    if elements < 1:
        raise SplineError("unit_box needs at least one element per direction")
    kv = [0.0] * (degree + 1) + [1.0] * (degree + 1)
    ticks = np.linspace(0.0, 1.0, degree + 1)
    mesh = np.meshgrid(*([ticks] * dim), indexing="ij")
    points = np.stack(mesh, axis=-1)
    box: Spline = BSpline([kv] * dim, [degree] * dim, points)
    for d in range(dim):
        for k in range(1, elements):
            box = insert_knot(box, d, k / elements)
    return box
