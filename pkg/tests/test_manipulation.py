import numpy as np
import pytest

from helpers import demo_curve, quarter_circle, random_params, random_spline
from splinekit import BSpline, SplineError, insert_knot, remove_knot, same_spline, subdivide


def _parabola_curve():
    return BSpline([[0, 0, 0, 1, 1, 1]], [2], [(-1.0, 0.0), (0.0, 2.0), (1.0, 0.0)])


def _max_deviation(a, b, params):
    return max(np.max(np.abs(a.evaluate(pc) - b.evaluate(pc))) for pc in params)


class TestInsert:
    def test_example(self):
        s = insert_knot(_parabola_curve(), 0, 0.5)
        assert s.knot_vectors[0].knots == (0, 0, 0, 0.5, 1, 1, 1)
        assert np.allclose(s.control_points, [(-1, 0), (-0.5, 1), (0.5, 1), (1, 0)], atol=1e-15)

    def test_up_to_full_multiplicity(self):
        s = insert_knot(_parabola_curve(), 0, 0.5, 3)
        assert s.sizes == (6,)
        with pytest.raises(SplineError):
            insert_knot(s, 0, 0.5)
        with pytest.raises(SplineError):
            insert_knot(_parabola_curve(), 0, 0.5, 4)

    def test_bilinear_surface(self):
        s = BSpline([[0, 0, 1, 1]] * 2, [1, 1], [[(0, 0, 0), (0, 1, 1)], [(1, 0, 2), (1, 1, 0)]])
        t = insert_knot(s, 1, 0.5)
        assert t.sizes == (2, 3)
        assert t.knot_vectors[0] == s.knot_vectors[0]
        grid = [(u, v) for u in np.linspace(0, 1, 7) for v in np.linspace(0, 1, 7)]
        assert _max_deviation(s, t, grid) <= 1e-15

    def test_errors(self):
        s = _parabola_curve()
        for bad in (0.0, 1.0, -0.2):
            with pytest.raises(SplineError):
                insert_knot(s, 0, bad)
        with pytest.raises(SplineError):
            insert_knot(s, 1, 0.5)
        with pytest.raises(SplineError):
            insert_knot(s, 0, 0.5, 0)

    def test_random_invariance(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            s = random_spline(rng)
            d = int(rng.integers(0, s.dim))
            u = float(rng.uniform(0.01, 0.99))
            room = s.degrees[d] + 1 - s.knot_vectors[d].knots.count(u)
            mult = int(rng.integers(1, room + 1))
            t = insert_knot(s, d, u, mult)
            assert t.sizes[d] == s.sizes[d] + mult
            assert len(t.knot_vectors[d]) == len(s.knot_vectors[d]) + mult
            assert all(t.sizes[k] == s.sizes[k] for k in range(s.dim) if k != d)
            assert _max_deviation(s, t, random_params(rng, s, 100)) <= 1e-10

    def test_nurbs_keeps_circle(self):
        q = insert_knot(quarter_circle(), 0, 0.3, 2)
        for u in np.linspace(0, 1, 50):
            assert abs(np.linalg.norm(q.evaluate([u])) - 1.0) <= 1e-14


class TestRemove:
    def test_inverts_insertion(self):
        s = demo_curve()
        back, removed = remove_knot(insert_knot(s, 0, 0.5), 0, 0.5, tolerance=1e-10)
        assert removed == 1
        assert same_spline(back, s, atol=1e-12)

    def test_tolerance_gate(self):
        s = BSpline([[0, 0, 0, 0.5, 1, 1, 1]], [2], [(0, 0), (1, 1), (2, -1), (3, 0)])
        back, removed = remove_knot(s, 0, 0.5, tolerance=1e-10)
        assert removed == 0 and back is s

    def test_partial_success(self):
        s = insert_knot(_parabola_curve(), 0, 0.5, 3)
        back, removed = remove_knot(s, 0, 0.5, times=5)
        assert removed == 3
        assert same_spline(back, _parabola_curve(), atol=1e-12)

    def test_errors(self):
        with pytest.raises(SplineError):
            remove_knot(demo_curve(), 0, 0.5)
        with pytest.raises(SplineError):
            remove_knot(demo_curve(), 0, 0.0)
        s = insert_knot(demo_curve(), 0, 0.5)
        with pytest.raises(SplineError):
            remove_knot(s, 0, 0.5, times=0)
        with pytest.raises(SplineError):
            remove_knot(s, 0, 0.5, tolerance=0.0)

    def test_random_insert_remove(self):
        rng = np.random.default_rng(32)
        for _ in range(60):
            s = random_spline(rng)
            d = int(rng.integers(0, s.dim))
            u = float(np.round(rng.uniform(0.01, 0.99), 4))
            if u in s.knot_vectors[d].knots:
                continue
            back, removed = remove_knot(insert_knot(s, d, u), d, u, tolerance=1e-10)
            assert removed == 1
            assert same_spline(back, s, atol=1e-12)

    def test_noisy_curve_within_tolerance(self):
        rng = np.random.default_rng(33)
        samples = np.linspace(0, 1, 2001)[:, None]
        for tol in (1e-3, 1e-2, 1e-1):
            for _ in range(10):
                kv = [0.0] * 4 + list(np.linspace(0.1, 0.9, 9)) + [1.0] * 4
                pts = np.column_stack([np.linspace(0, 1, 13), 0.05 * rng.normal(size=13)])
                s = BSpline([kv], [3], pts)
                knot = float(kv[4 + int(rng.integers(0, 9))])
                smooth = insert_knot(s, 0, knot, 2)
                pts2 = smooth.control_points + tol * 0.3 * rng.normal(size=smooth.control_points.shape)
                noisy = smooth.with_control_points(pts2)
                reduced, _ = remove_knot(noisy, 0, knot, times=3, tolerance=tol)
                assert _max_deviation(noisy, reduced, samples) <= tol

    def test_nurbs_within_tolerance(self):
        rng = np.random.default_rng(34)
        samples = np.linspace(0, 1, 501)[:, None]
        for _ in range(20):
            s = random_spline(rng, dim=1, rational=True, max_extra=5)
            d = 0
            u = float(np.round(rng.uniform(0.05, 0.95), 4))
            t = insert_knot(s, d, u)
            noisy = t.with_control_points(t.control_points + 1e-4 * rng.normal(size=t.control_points.shape))
            for tol in (1e-5, 1e-3):
                reduced, _ = remove_knot(noisy, d, u, tolerance=tol)
                assert _max_deviation(noisy, reduced, samples) <= tol


class TestSubdivide:
    def test_example(self):
        left, right = subdivide(demo_curve(), 0, 0.5)
        assert left.knot_vectors[0].knots == (0, 0, 0, 0.5, 0.5, 0.5)
        assert right.knot_vectors[0].knots == (0.5, 0.5, 0.5, 1, 1, 1)
        assert np.array_equal(left.evaluate([0.5]), right.evaluate([0.5]))

    def test_surface_keeps_other_direction(self):
        rng = np.random.default_rng(35)
        s = random_spline(rng, dim=2)
        left, right = subdivide(s, 0, 0.4)
        assert left.knot_vectors[1] == s.knot_vectors[1] == right.knot_vectors[1]
        assert left.sizes[1] == s.sizes[1]

    def test_boundary_error(self):
        with pytest.raises(SplineError):
            subdivide(demo_curve(), 0, 1.0)

    def test_random_halves(self):
        rng = np.random.default_rng(36)
        for _ in range(40):
            s = random_spline(rng)
            d = int(rng.integers(0, s.dim))
            at = float(rng.uniform(0.05, 0.95))
            left, right = subdivide(s, d, at)
            for pc in random_params(rng, s, 50):
                part = left if pc[d] <= at else right
                assert np.allclose(part.evaluate(pc), s.evaluate(pc), atol=1e-10)
