"""Random spline generators shared by the tests (seeded, reproducible)."""

from __future__ import annotations

import numpy as np

from splinekit import BSpline, Nurbs


def random_knot_vector(rng: np.random.Generator, degree: int, n_cp: int, repeat_prob: float = 0.2) -> list[float]:
    """Clamped knot vector on [0, 1] with ``n_cp`` control points.

    Interior knots are random and may repeat (up to ``degree`` times).
    """
    interior = []
    while len(interior) < n_cp - degree - 1:
        u = float(np.round(rng.uniform(0.05, 0.95), 6))
        room = n_cp - degree - 1 - len(interior)
        reps = 1
        if rng.random() < repeat_prob and degree > 1:
            reps = int(rng.integers(1, min(degree, room) + 1))
        interior += [u] * reps
    interior.sort()
    return [0.0] * (degree + 1) + interior + [1.0] * (degree + 1)


def random_spline(
    rng: np.random.Generator,
    dim: int | None = None,
    space_dim: int | None = None,
    max_degree: int = 4,
    rational: bool | None = None,
    max_extra: int = 3,
):
    dim = int(rng.integers(1, 4)) if dim is None else dim
    space_dim = int(rng.integers(1, 4)) if space_dim is None else space_dim
    rational = bool(rng.random() < 0.5) if rational is None else rational
    degrees, kvs = [], []
    for _ in range(dim):
        p = int(rng.integers(1, max_degree + 1))
        n_cp = p + 1 + int(rng.integers(0, max_extra + 1))
        degrees.append(p)
        kvs.append(random_knot_vector(rng, p, n_cp))
    sizes = tuple(len(kv) - p - 1 for kv, p in zip(kvs, degrees))
    points = rng.uniform(-1.0, 1.0, sizes + (space_dim,))
    if rational:
        return Nurbs(kvs, degrees, points, rng.uniform(0.5, 2.0, sizes))
    return BSpline(kvs, degrees, points)


def random_params(rng: np.random.Generator, spline, count: int) -> np.ndarray:
    lo = np.array([kv.first for kv in spline.knot_vectors])
    hi = np.array([kv.last for kv in spline.knot_vectors])
    return lo + (hi - lo) * rng.random((count, spline.dim))


def quarter_circle() -> Nurbs:
    return Nurbs(
        [[0, 0, 0, 1, 1, 1]], [2], [(1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], [1.0, np.sqrt(2) / 2, 1.0]
    )


def demo_curve() -> BSpline:
    """Quadratic curve with control points (-1,0), (0,0), (1,0)."""
    return BSpline([[0, 0, 0, 1, 1, 1]], [2], [(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)])


def far_from_knots(spline, pc, gap: float = 1e-3) -> bool:
    for kv, u in zip(spline.knot_vectors, pc):
        if np.min(np.abs(kv.to_array() - u)) < gap:
            return False
    return True


def iges_file(entities):
    """Assemble an IGES file from ``(type, parameter text)`` pairs.

    Written independently of the package writer: S/G/D/P/T records, 80 columns.
    """

    def rec(text, letter, seq):
        assert len(text) <= 72
        return f"{text:<72}{letter}{seq:7d}"

    start = [rec("hand-made test file", "S", 1)]
    glob = [rec("1H,,1H;,4Htest,8Htest.igs,4Htest,3H1.0,32,38,6,308,15,4Htest,1.0,2,", "G", 1),
            rec("2HMM,1,1.0,15H20200101.000000,1.0E-6,100.0,,,11,0;", "G", 2)]
    directory, params = [], []
    for etype, text in entities:
        de = len(directory) + 1
        chunks = [text[i : i + 64] for i in range(0, len(text), 64)]
        first = len(params) + 1
        for chunk in chunks:
            params.append(f"{chunk:<64}{de:8d}P{len(params) + 1:7d}")
        directory.append(f"{etype:8d}{first:8d}{0:8d}{0:8d}{0:8d}{0:8d}{0:8d}{0:8d}{'00000000':>8}D{de:7d}")
        directory.append(f"{etype:8d}{0:8d}{0:8d}{len(chunks):8d}{0:8d}{'':8}{'':8}{'':8}{0:8d}D{de + 1:7d}")
    term = rec(f"S{1:7d}G{2:7d}D{len(directory):7d}P{len(params):7d}", "T", 1)
    return "\n".join(start + glob + directory + params + [term]) + "\n"
