import random
from fractions import Fraction

import pytest

from kcones.elliott import TraceConeX, XElement
from kcones.rationals import INF, ExtRat
from kcones.stevens import coordinate_family


@pytest.fixture
def coord2():
    return TraceConeX(coordinate_family(2), 0)


@pytest.fixture
def coord3():
    return TraceConeX(coordinate_family(3), 0)


def grid_vectors(n, values):
    """All extended vectors over the given per-coordinate value set."""
    if n == 0:
        return [()]
    shorter = grid_vectors(n - 1, values)
    return [v + (x,) for v in shorter for x in values]


def embed(cone: TraceConeX, x: XElement):
    """Coordinate-model embedding of an X element into [0, inf]^n."""
    out = []
    order = sorted(x.support)
    for i in range(1, cone.family.rank + 1):
        if i in x.support:
            out.append(ExtRat(x.finite[order.index(i)]))
        else:
            out.append(INF)
    return tuple(out)


def unembed(cone: TraceConeX, vector):
    """Inverse of ``embed`` for coordinate models."""
    support = frozenset(i + 1 for i, v in enumerate(vector) if ExtRat(v).is_finite)
    finite = [ExtRat(v).finite_value for v in vector if ExtRat(v).is_finite]
    return cone.element(support, finite)


def random_fraction(rng: random.Random, top: int = 8) -> Fraction:
    return Fraction(rng.randrange(0, top), rng.randrange(1, 4))
