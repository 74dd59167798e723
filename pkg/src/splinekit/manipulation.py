"""Knot insertion, knot removal and subdivision in any parametric direction.

All operations work on homogeneous control points ``(w*P, w)`` along one
axis of the control grid, so NURBS and B-splines share the same code and the
other directions are carried along untouched.
"""

from __future__ import annotations

import numpy as np

from .core import KnotVector, find_knot_span, knot_multiplicity
from .errors import SplineError
from .spline import Spline


def _check_direction(spline: Spline, direction: int) -> None:
    if not 0 <= direction < spline.dim:
        raise SplineError(f"direction {direction} outside 0..{spline.dim - 1}")


def _check_interior(kv: KnotVector, u: float) -> None:
    if not kv.first < u < kv.last:
        raise SplineError(f"knot {u!r} is not strictly inside ({kv.first!r}, {kv.last!r})")


def _rebuild(spline: Spline, direction: int, kv: KnotVector, hom: np.ndarray) -> Spline:
    kvs = list(spline.knot_vectors)
    kvs[direction] = kv
    return Spline.from_homogeneous(kvs, spline.degrees, np.moveaxis(hom, 0, direction), spline.rational)


def _insert_once(kv: KnotVector, p: int, hom: np.ndarray, u: float) -> tuple[KnotVector, np.ndarray]:
    """Boehm insertion of ``u`` once; ``hom`` has the control index on axis 0."""
    k = find_knot_span(kv, u)
    U = kv.knots
    new = np.empty((hom.shape[0] + 1,) + hom.shape[1:])
    new[: k - p + 1] = hom[: k - p + 1]
    new[k + 1 :] = hom[k:]
    for i in range(k - p + 1, k + 1):
        alpha = (u - U[i]) / (U[i + p] - U[i])
        new[i] = alpha * hom[i] + (1.0 - alpha) * hom[i - 1]
    return kv.inserted(u), new


def insert_knot(spline: Spline, direction: int, knot: float, multiplicity: int = 1) -> Spline:
    """Insert ``knot`` ``multiplicity`` times without changing the geometry."""
    _check_direction(spline, direction)
    kv = spline.knot_vectors[direction]
    p = spline.degrees[direction]
    u = float(knot)
    _check_interior(kv, u)
    if multiplicity < 1:
        raise SplineError(f"multiplicity must be positive, got {multiplicity}")
    s = knot_multiplicity(kv, u)
    if s + multiplicity > p + 1:
        raise SplineError(
            f"inserting {u!r} {multiplicity} times gives multiplicity {s + multiplicity} > degree+1 = {p + 1}"
        )
    hom = np.moveaxis(spline.homogeneous_grid(), direction, 0)
    for _ in range(multiplicity):
        kv, hom = _insert_once(kv, p, hom, u)
    return _rebuild(spline, direction, kv, hom)


def _removal_tolerance(spline: Spline, tolerance: float) -> float:
    if not spline.rational:
        return tolerance
    # weight-aware bound for deviations measured in homogeneous space
    w_min = float(np.min(spline.weights))
    p_max = float(np.max(np.linalg.norm(spline.control_points, axis=-1)))
    return tolerance * w_min / (1.0 + p_max)


def _remove_once(
    kv: KnotVector, p: int, hom: np.ndarray, u: float, tol: float
) -> tuple[KnotVector, np.ndarray] | None:
    """Remove one occurrence of ``u`` if the removal test passes, else None."""
    U = kv.knots
    s = knot_multiplicity(kv, u)
    r = find_knot_span(kv, u)  # last occurrence of an interior knot
    first, last = r - p, r - s
    off = first - 1
    temp = [None] * (last - off + 2)
    temp[0] = hom[off]
    temp[last + 1 - off] = hom[last + 1]
    i, j, ii, jj = first, last, 1, last - off
    while j - i > 0:
        ai = (u - U[i]) / (U[i + p + 1] - U[i])
        aj = (u - U[j]) / (U[j + p + 1] - U[j])
        temp[ii] = (hom[i] - (1.0 - ai) * temp[ii - 1]) / ai
        temp[jj] = (hom[j] - aj * temp[jj + 1]) / (1.0 - aj)
        i, ii, j, jj = i + 1, ii + 1, j - 1, jj - 1
    if j - i < 0:
        gap = temp[ii - 1] - temp[jj + 1]
    else:
        ai = (u - U[i]) / (U[i + p + 1] - U[i])
        gap = hom[i] - (ai * temp[ii + 1] + (1.0 - ai) * temp[ii - 1])
    if np.max(np.linalg.norm(np.atleast_1d(gap), axis=-1)) > tol:
        return None
    new = hom.copy()
    i, j = first, last
    while j - i > 0:
        new[i] = temp[i - off]
        new[j] = temp[j - off]
        i, j = i + 1, j - 1
    fout = (2 * r - s - p) // 2
    new = np.delete(new, fout, axis=0)
    return KnotVector(U[:r] + U[r + 1 :]), new


def remove_knot(
    spline: Spline, direction: int, knot: float, times: int = 1, tolerance: float = 1e-10
) -> tuple[Spline, int]:
    """Remove ``knot`` up to ``times`` times while staying within ``tolerance``.

    Each single removal must pass the local control-point test; in addition
    the candidate is re-refined to the original knot vector and its control
    points compared with the original ones, which bounds the accumulated
    deviation of the curve by ``tolerance`` (convex-hull property).

    Returns the new spline and the number of successful removals; when the
    first removal already fails the input spline is returned unchanged.
    """
    _check_direction(spline, direction)
    kv = spline.knot_vectors[direction]
    p = spline.degrees[direction]
    u = float(knot)
    if knot_multiplicity(kv, u) == 0:
        raise SplineError(f"knot {u!r} is not in the knot vector of direction {direction}")
    _check_interior(kv, u)
    if times < 1:
        raise SplineError(f"times must be positive, got {times}")
    if not tolerance > 0:
        raise SplineError(f"tolerance must be positive, got {tolerance}")
    tol = _removal_tolerance(spline, tolerance)
    original = np.moveaxis(spline.homogeneous_grid(), direction, 0)
    cur_kv, cur = kv, original
    removed = 0
    while removed < times and knot_multiplicity(cur_kv, u) > 0:
        step = _remove_once(cur_kv, p, cur, u, tol)
        if step is None:
            break
        cand_kv, cand = step
        back_kv, back = cand_kv, cand
        for _ in range(removed + 1):
            back_kv, back = _insert_once(back_kv, p, back, u)
        if np.max(np.linalg.norm(back - original, axis=-1)) > tol:
            break
        cur_kv, cur = cand_kv, cand
        removed += 1
    if removed == 0:
        return spline, 0
    return _rebuild(spline, direction, cur_kv, cur), removed


def subdivide(spline: Spline, direction: int, at: float) -> tuple[Spline, Spline]:
    """Split into the pieces over ``[u_0, at]`` and ``[at, u_m]``.

    Knot values are kept as they are (no re-normalization of each half).
    """
    _check_direction(spline, direction)
    kv = spline.knot_vectors[direction]
    p = spline.degrees[direction]
    u = float(at)
    _check_interior(kv, u)
    missing = p + 1 - knot_multiplicity(kv, u)
    refined = insert_knot(spline, direction, u, missing) if missing > 0 else spline
    rkv = refined.knot_vectors[direction]
    k = rkv.knots.index(u)
    hom = np.moveaxis(refined.homogeneous_grid(), direction, 0)
    left = _rebuild(refined, direction, KnotVector(rkv.knots[: k + p + 1]), hom[:k])
    right = _rebuild(refined, direction, KnotVector(rkv.knots[k:]), hom[k:])
    return left, right
