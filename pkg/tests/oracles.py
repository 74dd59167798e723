"""Independent reference implementations used to check the package.

Nothing here imports splinekit: each oracle is written from the textbook
definition, without caching, locality or tensor tricks.
"""

from __future__ import annotations

import numpy as np


def cox_de_boor(knots, i, p, u):
    """N_{i,p}(u) by the plain recursion; the last non-empty span is closed."""
    knots = list(knots)
    if p == 0:
        lo, hi = knots[i], knots[i + 1]
        if lo <= u < hi:
            return 1.0
        # closed right end: u equals the last knot and [lo, hi] is the last non-empty span
        if u == knots[-1] and hi == knots[-1] and lo < hi:
            return 1.0
        return 0.0
    out = 0.0
    d1 = knots[i + p] - knots[i]
    if d1 != 0.0:
        out += (u - knots[i]) / d1 * cox_de_boor(knots, i, p - 1, u)
    d2 = knots[i + p + 1] - knots[i + 1]
    if d2 != 0.0:
        out += (knots[i + p + 1] - u) / d2 * cox_de_boor(knots, i + 1, p - 1, u)
    return out


def cox_de_boor_derivative(knots, i, p, u, k):
    """k-th derivative by the standard difference-of-lower-degree formula."""
    if k == 0:
        return cox_de_boor(knots, i, p, u)
    if p == 0:
        return 0.0
    out = 0.0
    d1 = knots[i + p] - knots[i]
    if d1 != 0.0:
        out += p / d1 * cox_de_boor_derivative(knots, i, p - 1, u, k - 1)
    d2 = knots[i + p + 1] - knots[i + 1]
    if d2 != 0.0:
        out -= p / d2 * cox_de_boor_derivative(knots, i + 1, p - 1, u, k - 1)
    return out


def span_by_scan(knots, u):
    """Linear scan for the span index; the last knot maps to the last non-empty span."""
    knots = list(knots)
    if u == knots[-1]:
        for i in range(len(knots) - 2, -1, -1):
            if knots[i] < knots[i + 1]:
                return i
    for i in range(len(knots) - 1):
        if knots[i] <= u < knots[i + 1]:
            return i
    raise ValueError("u outside the knot range")


def full_sum(knot_vectors, degrees, points, weights=None, u=None):
    """Point of a tensor-product (rational) spline by summing every basis product.

    ``points`` is a grid ``(*sizes, N)``; no locality is used.
    """
    points = np.asarray(points, dtype=float)
    sizes = points.shape[:-1]
    w = np.ones(sizes) if weights is None else np.asarray(weights, dtype=float)
    num = np.zeros(points.shape[-1])
    den = 0.0
    for idx in np.ndindex(*sizes):
        b = 1.0
        for d, i in enumerate(idx):
            b *= cox_de_boor(knot_vectors[d], i, degrees[d], u[d])
        if b:
            num += b * w[idx] * points[idx]
            den += b * w[idx]
    return num / den


def cube_series(x, y, z, n_max=41):
    """Series solution of -laplace(u) = 1 on the unit cube, u = 0 on the boundary.

    Odd terms up to ``n_max`` in each index; broadcasts over array inputs.
    """
    n = np.arange(1, n_max + 1, 2, dtype=float)
    x, y, z = (np.asarray(v, dtype=float)[..., None] for v in (x, y, z))
    sx, sy, sz = np.sin(np.pi * n * x), np.sin(np.pi * n * y), np.sin(np.pi * n * z)
    i, j, k = np.meshgrid(n, n, n, indexing="ij")
    coef = 1.0 / (i * j * k * (i * i + j * j + k * k))
    return 64.0 / np.pi**5 * np.einsum("...i,...j,...k,ijk->...", sx, sy, sz, coef)


def square_series(x, y, n_max=199):
    """Series solution of -laplace(u) = 1 on the unit square, u = 0 on the boundary."""
    n = np.arange(1, n_max + 1, 2, dtype=float)
    x, y = (np.asarray(v, dtype=float)[..., None] for v in (x, y))
    sx, sy = np.sin(np.pi * n * x), np.sin(np.pi * n * y)
    i, j = np.meshgrid(n, n, indexing="ij")
    coef = 1.0 / (i * j * (i * i + j * j))
    return 16.0 / np.pi**4 * np.einsum("...i,...j,ij->...", sx, sy, coef)


def bar_solution(x):
    """Exact solution of -u'' = 1 on [0, 1] with u(0) = u(1) = 0."""
    return 0.5 * x * (1.0 - x)
