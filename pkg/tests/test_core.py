import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import span_by_scan
from splinekit import KnotVector, SplineError, TensorGrid, delinearize, find_knot_span, knot_multiplicity, linearize
from splinekit.core import grid_from_linear, linear_from_grid, validate_knot_vector


class TestKnotVector:
    def test_valid_examples(self):
        assert validate_knot_vector([0, 0, 0, 1, 1, 1]).m == 5
        assert validate_knot_vector([0, 0.3, 0.3, 0.7, 1]).knots == (0.0, 0.3, 0.3, 0.7, 1.0)

    @pytest.mark.parametrize("knots", [[0, 1, 0.5], [0.0], [], [0, float("nan"), 1], [0, float("inf")]])
    def test_invalid(self, knots):
        with pytest.raises(SplineError):
            validate_knot_vector(knots)

    def test_immutable_and_hashable(self):
        kv = KnotVector([0, 0, 1, 1])
        assert kv == KnotVector((0.0, 0.0, 1.0, 1.0))
        assert hash(kv) == hash(KnotVector([0, 0, 1, 1]))
        with pytest.raises(TypeError):
            kv[0] = 3.0

    def test_clamped(self):
        assert KnotVector([0, 0, 0, 1, 1, 1]).is_clamped(2)
        assert not KnotVector([0, 0, 0, 1, 1, 1]).is_clamped(1)
        assert not KnotVector([0, 0, 0.5, 1, 1, 1]).is_clamped(2)

    def test_distinct_and_spans(self):
        kv = KnotVector([0, 0, 0, 0.5, 0.5, 1, 1, 1])
        assert kv.distinct() == [0.0, 0.5, 1.0]
        assert kv.nonzero_spans() == [2, 4]

    def test_inserted(self):
        assert KnotVector([0, 0, 1, 1]).inserted(0.25, 2).knots == (0, 0, 0.25, 0.25, 1, 1)


class TestFindKnotSpan:
    @pytest.mark.parametrize(
        "knots,u,expected",
        [
            ([0, 0, 0, 1, 1, 1], 0.5, 2),
            ([0, 0, 0, 1, 1, 1], 1.0, 2),
            ([0, 0, 0, 0.5, 1, 1, 1], 0.5, 3),
            ([0, 0, 0, 1, 1, 1], 0.0, 2),
        ],
    )
    def test_examples(self, knots, u, expected):
        assert find_knot_span(KnotVector(knots), u) == expected

    def test_out_of_range(self):
        with pytest.raises(SplineError):
            find_knot_span(KnotVector([0, 0, 1, 1]), 1.5)
        with pytest.raises(SplineError):
            find_knot_span(KnotVector([0, 0, 1, 1]), -1e-9)

    def test_ties_resolve_to_last_occurrence(self):
        kv = KnotVector([0, 0, 0, 0.4, 0.4, 0.7, 1, 1, 1])
        assert find_knot_span(kv, 0.4) == 4

    @given(
        st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=1, max_size=10),
        st.floats(0.0, 1.0, allow_nan=False),
    )
    def test_membership(self, interior, frac):
        knots = sorted([0.0, 0.0] + interior + [1.0, 1.0])
        kv = KnotVector(knots)
        u = frac
        i = find_knot_span(kv, u)
        assert i == span_by_scan(knots, u)
        if u == kv.last:
            assert knots[i] < knots[i + 1] == u
        else:
            assert knots[i] <= u < knots[i + 1]


class TestMultiplicity:
    @pytest.mark.parametrize(
        "knots,u,expected",
        [([0, 0, 0, 1, 1, 1], 0.0, 3), ([0, 0, 0, 1, 1, 1], 0.5, 0), ([0, 0, 0.5, 0.5, 1, 1], 0.5, 2)],
    )
    def test_examples(self, knots, u, expected):
        assert knot_multiplicity(KnotVector(knots), u) == expected

    @given(st.lists(st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]), min_size=2, max_size=12))
    def test_sums_to_length(self, knots):
        kv = KnotVector(sorted(knots))
        assert sum(knot_multiplicity(kv, u) for u in kv.distinct()) == len(kv)


class TestTensorGrid:
    def test_examples(self):
        assert linearize((3, 2), (2, 1)) == 5
        assert linearize((3, 2), (0, 0)) == 0
        assert delinearize((3, 2), 4) == (1, 1)

    def test_out_of_range(self):
        with pytest.raises(SplineError):
            linearize((3, 2), (3, 0))
        with pytest.raises(SplineError):
            delinearize((3, 2), 6)

    @given(st.lists(st.integers(1, 5), min_size=1, max_size=4))
    def test_bijection(self, sizes):
        grid = TensorGrid(sizes)
        seen = [grid.linearize(mi) for mi in grid]
        assert seen == list(range(len(grid)))
        for lin in range(len(grid)):
            assert grid.linearize(grid.delinearize(lin)) == lin

    def test_grid_conversion_round_trip(self):
        rng = np.random.default_rng(3)
        sizes = (3, 4, 2)
        values = rng.random((24, 2))
        grid = grid_from_linear(values, sizes)
        assert grid.shape == sizes + (2,)
        assert np.array_equal(grid[1, 2, 1], values[linearize(sizes, (1, 2, 1))])
        assert np.array_equal(linear_from_grid(grid), values)
