"""Extended nonnegative rationals: the value domain of traces.

A trace value is either a nonnegative rational in lowest terms or +infinity.
Addition and multiplication by strictly positive rationals follow the usual
extended conventions (inf absorbs).  Multiplication by zero is rejected for
cone scalars; the pairing is where the 0 * inf = 0 convention lives, and it
is implemented there, not here.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import DimensionError, DomainError


@total_ordering
class ExtRat:
    """A nonnegative rational or +infinity, immutable and hashable.

    >>> ExtRat(1, 2) + ExtRat(1, 3)
    ExtRat(5/6)
    >>> ExtRat.infinity() + ExtRat(7)
    ExtRat(inf)
    >>> ExtRat(3) <= ExtRat.infinity()
    True
    """

    __slots__ = ("_value",)

    def __init__(self, numerator=0, denominator=None):
        if isinstance(numerator, ExtRat):
            self._value = numerator._value
            return
        if numerator is None:
            self._value = None
            return
        if denominator is None:
            value = Fraction(numerator)
        else:
            if denominator == 0:
                raise DomainError("zero denominator")
            value = Fraction(numerator, denominator)
        if value < 0:
            raise DomainError(f"trace values are nonnegative, got {value}")
        self._value = value

    @classmethod
    def infinity(cls) -> "ExtRat":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def finite_value(self) -> Fraction:
        if self._value is None:
            raise DomainError("infinite value has no finite part")
        return self._value

    def __add__(self, other):
        other = _coerce(other)
        if self._value is None or other._value is None:
            return INF
        return ExtRat(self._value + other._value)

    __radd__ = __add__

    def scaled(self, alpha) -> "ExtRat":
        """Multiply by a strictly positive rational scalar."""
        alpha = Fraction(alpha)
        if alpha <= 0:
            raise DomainError("cone scalars are strictly positive")
        if self._value is None:
            return INF
        return ExtRat(alpha * self._value)

    def __eq__(self, other):
        if isinstance(other, (ExtRat, int, Fraction)):
            return self._value == _coerce(other)._value
        return NotImplemented

    def __lt__(self, other):
        other = _coerce(other)
        if self._value is None:
            return False
        if other._value is None:
            return True
        return self._value < other._value

    def __hash__(self):
        return hash(("ExtRat", self._value))

    def __repr__(self):
        return f"ExtRat({self})"

    def __str__(self):
        return "inf" if self._value is None else str(self._value)


INF = ExtRat.infinity()


def _coerce(x) -> ExtRat:
    return x if isinstance(x, ExtRat) else ExtRat(x)


def ext_add(a, b) -> ExtRat:
    """Extended addition; inf + x = inf."""
    return _coerce(a) + _coerce(b)


def ext_scale(alpha, a) -> ExtRat:
    """Scale by a strictly positive rational; raises DomainError on alpha <= 0."""
    return _coerce(a).scaled(alpha)


def ext_min(a, b) -> ExtRat:
    a, b = _coerce(a), _coerce(b)
    return a if a <= b else b


def ext_max(a, b) -> ExtRat:
    a, b = _coerce(a), _coerce(b)
    return b if a <= b else a


def ext_vec(values) -> tuple:
    """Coerce a sequence into a tuple of ExtRat."""
    return tuple(_coerce(v) for v in values)


def same_length(u, v):
    if len(u) != len(v):
        raise DimensionError(f"vector lengths differ: {len(u)} vs {len(v)}")
