import random
from fractions import Fraction

import pytest

from kcones.errors import DimensionError
from kcones.linalg import (Mat, cone_member, enumerate_vertices, feasible_point,
                           fiber_minimum, lp_min, vec_dot)


def test_mat_shapes_and_composition():
    a = Mat.from_rows([[1, 2], [3, 4]])
    b = Mat.from_rows([[1], [1]], cols=1)
    assert (a @ b).data == ((Fraction(3),), (Fraction(7),))
    empty = Mat.from_rows([], cols=2)
    assert (empty @ a).rows == 0 and (empty @ a).cols == 2
    point = Mat.from_rows([[]], cols=0)
    assert point.apply(()) == (Fraction(0),)
    with pytest.raises(DimensionError):
        a @ Mat.from_rows([[1, 2]], cols=2) @ a  # 1x2 then 2x2, then shape clash
    with pytest.raises(DimensionError):
        Mat.from_rows([], cols=None)


def test_lp_min_known_cases():
    # min x + y subject to x + y = 1
    value, x = lp_min([1, 1], [[1, 1]], [1])
    assert value == 1 and sum(x) == 1
    # min 2x + y subject to x + y = 1: put everything on y
    value, x = lp_min([2, 1], [[1, 1]], [1])
    assert value == 1 and x == (0, 1)
    # infeasible: x + y = -1 with x, y >= 0
    assert lp_min([1, 1], [[1, 1]], [-1]) is None
    # no variables
    assert lp_min([], [], []) == (0, ())
    assert lp_min([], [[]], [1]) is None
    # degenerate equalities
    value, x = lp_min([1], [[1], [1]], [2, 2])
    assert value == 2 and x == (2,)
    assert lp_min([1], [[1], [1]], [2, 3]) is None


def test_lp_min_matches_vertex_enumeration():
    rng = random.Random(31415)
    for _ in range(250):
        m = rng.randrange(1, 4)
        d = rng.randrange(1, 6)
        rows = [[Fraction(rng.randrange(0, 4)) for _ in range(d)] for _ in range(m)]
        x0 = [Fraction(rng.randrange(0, 4)) for _ in range(d)]
        b = [vec_dot(tuple(r), tuple(x0)) for r in rows]  # feasible by construction
        c = [Fraction(rng.randrange(0, 5)) for _ in range(d)]
        value, x = lp_min(c, rows, b)
        assert all(v >= 0 for v in x)
        assert [vec_dot(tuple(r), x) for r in rows] == b
        vertices = enumerate_vertices(rows, b, d)
        assert vertices, "a feasible pointed polyhedron has a vertex"
        best = min(vec_dot(tuple(c), v) for v in vertices)
        assert value == best


def test_cone_member():
    assert cone_member((1, 0), [(1, 0), (1, 1)]) is not None
    assert cone_member((0, 1), [(1, 0), (1, 1)]) is None
    assert cone_member((2, 2), [(1, 1)]) is not None
    assert cone_member((0, 0), []) is not None


def test_fiber_minimum_monomial_and_general():
    # monomial fast path
    assert fiber_minimum([[2, 0, 0]], [4], 3) == (2, 0, 0)
    assert fiber_minimum([[1, 0], [0, 3]], [1, 6], 2) == (1, 2)
    # mixing row: the fiber over a positive value has no least element
    assert fiber_minimum([[1, 1]], [1], 2) is None
    # but the zero fiber does
    assert fiber_minimum([[1, 1]], [0], 2) == (0, 0)
    # general path with a redundant constraint
    assert fiber_minimum([[1, 1], [2, 2]], [2, 4], 2) is None
    assert fiber_minimum([[1, 0], [1, 0]], [1, 1], 2) == (1, 0)


def test_feasible_point():
    x = feasible_point([[1, 1, 1]], [3], 3)
    assert x is not None and sum(x) == 3
    assert feasible_point([[1, 1]], [-2], 2) is None
