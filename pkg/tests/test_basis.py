import numpy as np
import pytest

from helpers import random_knot_vector
from oracles import cox_de_boor, cox_de_boor_derivative
from splinekit import (
    KnotVector,
    RecursiveBasisFunction,
    SplineError,
    ZeroDegreeBasisFunction,
    create_basis_function,
    eval_basis,
    eval_basis_derivative,
)
from splinekit.basis import inv_with_pos_zero_denom

BEZIER2 = KnotVector([0, 0, 0, 1, 1, 1])


def test_inv_with_pos_zero_denom():
    assert inv_with_pos_zero_denom(0.5) == 2.0
    assert inv_with_pos_zero_denom(0.0) == 0.0
    assert inv_with_pos_zero_denom(1.0) == 1.0


def _count(bf):
    if isinstance(bf, ZeroDegreeBasisFunction):
        return {"zero": 1, "recursive": 0}
    left, right = _count(bf.left_lower_degree), _count(bf.right_lower_degree)
    return {"zero": left["zero"] + right["zero"], "recursive": 1 + left["recursive"] + right["recursive"]}


class TestFactory:
    def test_tree_shape(self):
        bf = create_basis_function(BEZIER2, 0, 2)
        assert isinstance(bf, RecursiveBasisFunction)
        assert isinstance(bf.left_lower_degree, RecursiveBasisFunction)
        assert isinstance(bf.right_lower_degree, RecursiveBasisFunction)
        # children are built per parent, so the middle leaf appears twice
        assert _count(bf) == {"zero": 4, "recursive": 3}
        assert bf.end_knot_is_last_knot

    def test_base_case(self):
        bf = create_basis_function(KnotVector([0, 1]), 0, 0)
        assert isinstance(bf, ZeroDegreeBasisFunction)
        assert (bf.start_knot, bf.end_knot) == (0.0, 1.0)
        assert bf(1.0) == 1.0

    def test_cached_denominators(self):
        kv = KnotVector([0, 0, 0, 0.25, 1, 1, 1])
        bf = create_basis_function(kv, 1, 2)
        assert bf.left_denom_inv == pytest.approx(1 / 0.25)
        assert bf.right_denom_inv == pytest.approx(1 / 1.0)
        assert create_basis_function(kv, 0, 2).left_denom_inv == 0.0

    def test_support_exceeds_knots(self):
        with pytest.raises(SplineError):
            create_basis_function(BEZIER2, 3, 2)
        with pytest.raises(SplineError):
            create_basis_function(BEZIER2, 0, -1)


class TestEval:
    @pytest.mark.parametrize(
        "i,u,expected", [(0, 0.5, 0.25), (1, 0.5, 0.5), (0, 2.0, 0.0), (2, 1.0, 1.0), (0, 0.0, 1.0)]
    )
    def test_bernstein(self, i, u, expected):
        assert eval_basis(create_basis_function(BEZIER2, i, 2), u) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("i,u,expected", [(1, 0.5, 0.0), (0, 0.25, -1.5), (2, 1.0, 2.0)])
    def test_bernstein_derivative(self, i, u, expected):
        bf = create_basis_function(BEZIER2, i, 2)
        assert eval_basis_derivative(bf, u, 1) == pytest.approx(expected, abs=1e-14)

    def test_order_zero_is_eval(self):
        bf = create_basis_function(KnotVector([0, 0, 0.3, 0.6, 1, 1]), 1, 1)
        for u in np.linspace(0, 1, 23):
            assert bf.eval_derivative(u, 0) == bf.eval(u)

    def test_zero_degree_derivative(self):
        bf = create_basis_function(KnotVector([0, 1]), 0, 0)
        assert bf.eval_derivative(0.5, 1) == 0.0

    def test_half_open_interior(self):
        kv = KnotVector([0, 0.5, 1])
        assert create_basis_function(kv, 0, 0)(0.5) == 0.0
        assert create_basis_function(kv, 1, 0)(0.5) == 1.0

    def test_negative_order(self):
        with pytest.raises(SplineError):
            create_basis_function(BEZIER2, 0, 2).eval_derivative(0.5, -1)


def _random_case(rng):
    p = int(rng.integers(0, 5))
    n_cp = p + 1 + int(rng.integers(0, 12 - 2 * (p + 1) + 1))
    knots = random_knot_vector(rng, p, n_cp, repeat_prob=0.3) if p > 0 else sorted(
        [0.0] + list(np.round(rng.random(n_cp - 1), 3)) + [1.0]
    )
    i = int(rng.integers(0, len(knots) - p - 1))
    return knots, i, p


class TestProperties:
    def test_oracle_equivalence(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            knots, i, p = _random_case(rng)
            bf = create_basis_function(KnotVector(knots), i, p)
            for u in [float(rng.random()), 1.0, 0.0, knots[min(i + 1, len(knots) - 1)]]:
                assert abs(bf(u) - cox_de_boor(knots, i, p, u)) <= 1e-12

    def test_derivatives_match_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(300):
            knots, i, p = _random_case(rng)
            bf = create_basis_function(KnotVector(knots), i, p)
            u = float(rng.random())
            for k in range(1, 4):
                ref = cox_de_boor_derivative(knots, i, p, u, k)
                assert bf(u, k) == pytest.approx(ref, rel=1e-9, abs=1e-9)

    def test_local_support_and_nonnegativity(self):
        rng = np.random.default_rng(13)
        for _ in range(300):
            knots, i, p = _random_case(rng)
            bf = create_basis_function(KnotVector(knots), i, p)
            lo, hi = knots[i], knots[i + p + 1]
            for u in rng.uniform(-0.5, 1.5, 10):
                value = bf(u)
                assert value >= 0.0
                if u < lo or u > hi:
                    assert value == 0.0
                    assert bf(u, 1) == 0.0

    def test_finite_differences(self):
        rng = np.random.default_rng(14)
        h = 1e-6
        checked = 0
        while checked < 200:
            knots, i, p = _random_case(rng)
            if p < 2:
                continue
            u = float(rng.uniform(0.01, 0.99))
            if np.min(np.abs(np.array(knots) - u)) < 1e-3:
                continue
            bf = create_basis_function(KnotVector(knots), i, p)
            for order in (1, 2):
                fd = (bf(u + h, order - 1) - bf(u - h, order - 1)) / (2 * h)
                exact = bf(u, order)
                assert abs(fd - exact) <= 1e-5 * max(1.0, abs(exact))
            checked += 1
