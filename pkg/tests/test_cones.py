import random
from fractions import Fraction

import pytest

from conftest import grid_vectors
from kcones.cones import (SimplicialCone, alg_leq, join_pointwise, meet_pointwise,
                          pairing, riesz_decompose, simplex_base_check, vec_ext_add)
from kcones.errors import DecompositionError, DimensionError, DomainError
from kcones.rationals import INF, ExtRat

GRID = (ExtRat(0), ExtRat(1), ExtRat(2), INF)


def test_pairing_examples():
    tau = (ExtRat(3), INF, ExtRat(1, 2))
    assert pairing((1, 0, 2), tau) == ExtRat(4)
    assert pairing((0, 1, 0), tau) == INF
    assert pairing((0, 0, 0), tau) == ExtRat(0)
    with pytest.raises(DimensionError):
        pairing((1, 0), tau)
    with pytest.raises(DomainError):
        pairing((-1, 0, 0), tau[:3])


def test_pairing_finite_exactly_on_support():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randrange(0, 4)
        p = tuple(rng.randrange(0, 3) for _ in range(n))
        tau = tuple(rng.choice(GRID) for _ in range(n))
        finite = pairing(p, tau).is_finite
        should = all(tau[i].is_finite for i in range(n) if p[i] > 0)
        assert finite == should


def test_pairing_bilinear_on_grid():
    rng = random.Random(4)
    for _ in range(200):
        n = rng.randrange(0, 4)
        p = tuple(rng.randrange(0, 3) for _ in range(n))
        q = tuple(rng.randrange(0, 3) for _ in range(n))
        t1 = tuple(rng.choice(GRID) for _ in range(n))
        t2 = tuple(rng.choice(GRID) for _ in range(n))
        assert pairing(p, vec_ext_add(t1, t2)) == pairing(p, t1) + pairing(p, t2)
        pq = tuple(a + b for a, b in zip(p, q))
        assert pairing(pq, t1) == pairing(p, t1) + pairing(q, t1)


def test_alg_leq_examples():
    assert alg_leq((ExtRat(1), INF), (ExtRat(2), INF))
    assert not alg_leq((INF, ExtRat(0)), (ExtRat(1), ExtRat(5)))
    v = (ExtRat(1), ExtRat(2))
    assert alg_leq(v, v)


def test_alg_leq_matches_witness_definition():
    # t1 <= t2 iff some grid witness t3 has t1 + t3 = t2 (exhaustive, n <= 2).
    for n in (1, 2):
        vectors = grid_vectors(n, GRID)
        for t1 in vectors:
            for t2 in vectors:
                witnessed = any(vec_ext_add(t1, t3) == t2 for t3 in vectors)
                assert alg_leq(t1, t2) == witnessed, (t1, t2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_meet_join_are_glb_lub_on_grid(n):
    vectors = grid_vectors(n, GRID)
    for t1 in vectors:
        for t2 in vectors:
            m = meet_pointwise(t1, t2)
            j = join_pointwise(t1, t2)
            assert alg_leq(m, t1) and alg_leq(m, t2)
            assert alg_leq(t1, j) and alg_leq(t2, j)
            for z in vectors:
                if alg_leq(z, t1) and alg_leq(z, t2):
                    assert alg_leq(z, m)
                if alg_leq(t1, z) and alg_leq(t2, z):
                    assert alg_leq(j, z)


def test_meet_join_examples():
    assert meet_pointwise((ExtRat(1), INF, ExtRat(2)), (ExtRat(3), ExtRat(1), INF)) == \
        (ExtRat(1), ExtRat(1), ExtRat(2))
    assert join_pointwise((ExtRat(1), INF), (ExtRat(3), ExtRat(1))) == (ExtRat(3), INF)
    v = (ExtRat(1), ExtRat(7))
    assert meet_pointwise(v, v) == v


def test_partial_order_axioms_on_grid():
    vectors = grid_vectors(2, GRID)
    for a in vectors:
        assert alg_leq(a, a)
        for b in vectors:
            if alg_leq(a, b) and alg_leq(b, a):
                assert a == b
            for c in vectors:
                if alg_leq(a, b) and alg_leq(b, c):
                    assert alg_leq(a, c)


def test_riesz_examples():
    g, h = riesz_decompose((2, 1), (1, 1), (3, 0))
    assert g == (1, 1) and h == (1, 0)
    f = (Fraction(1, 2), Fraction(3))
    g, h = riesz_decompose(f, f, (0, 0))
    assert g == f and h == (0, 0)
    with pytest.raises(DecompositionError) as err:
        riesz_decompose((5,), (1,), (1,))
    assert err.value.witness == 1


def test_riesz_random_triples():
    rng = random.Random(2024)
    for _ in range(1000):
        n = rng.randrange(0, 5)
        g = tuple(Fraction(rng.randrange(0, 7), rng.randrange(1, 4)) for _ in range(n))
        h = tuple(Fraction(rng.randrange(0, 7), rng.randrange(1, 4)) for _ in range(n))
        bound = tuple(a + b for a, b in zip(g, h))
        f = tuple(x * Fraction(rng.randrange(0, 4), 3) for x in bound)
        g_hat, h_hat = riesz_decompose(f, g, h)
        assert tuple(a + b for a, b in zip(g_hat, h_hat)) == f
        assert all(a <= b for a, b in zip(g_hat, g))
        assert all(a <= b for a, b in zip(h_hat, h))
        assert all(a >= 0 for a in g_hat) and all(a >= 0 for a in h_hat)


def test_simplex_base_check():
    assert simplex_base_check(SimplicialCone(2, (1, Fraction(1, 2)))).ok
    report = simplex_base_check(SimplicialCone(2, (1, 0)))
    assert not report.ok and "ray 2" in report.violations[0].detail
    assert simplex_base_check(SimplicialCone(0, ())).ok
