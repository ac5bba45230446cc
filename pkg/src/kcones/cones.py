"""Simplicial cones, extended trace vectors, and the pairing with K0.

Extended trace vectors live in [0, inf]^n and carry the algebraic order
(t1 <= t2 iff some t3 has t1 + t3 = t2), which is coordinatewise here.
Finite cone elements and functionals are plain tuples of Fraction in ray
coordinates.  The Riesz decomposition is the coordinatewise one.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import DecompositionError, DimensionError, DomainError
from .groups import Report, Violation
from .linalg import fr, vec
from .rationals import ExtRat, ext_add, ext_max, ext_min, same_length


@dataclass(frozen=True)
class SimplicialCone:
    """[0, inf)^dim together with the functional cutting out its base simplex."""

    dim: int
    base: tuple

    def __post_init__(self):
        if self.dim < 0:
            raise DomainError("cone dimension must be nonnegative")
        base = vec(self.base)
        if len(base) != self.dim:
            raise DimensionError("base functional length must equal the cone dimension")
        object.__setattr__(self, "base", base)


def simplex_base_check(cone: SimplicialCone) -> Report:
    """The base is a simplex iff every ray meets it, i.e. beta is strictly positive."""
    bad = tuple(Violation("simplex-base", f"base functional vanishes on ray {i + 1}")
                for i, x in enumerate(cone.base) if x <= 0)
    return Report(bad)


# ---------------------------------------------------------------------------
# Extended trace vectors


def pairing(p, tau) -> ExtRat:
    """Evaluate a trace vector at a positive K0 element: sum p_i tau_i.

    Blocks where p vanishes contribute nothing even when the trace is
    infinite there (the 0 * inf = 0 convention, forced by lower
    semicontinuity).  The result is finite exactly when tau is finite on
    the support of p.
    """
    same_length(p, tau)
    if any(x < 0 for x in p):
        raise DomainError("pairing takes a nonnegative K0 element")
    total = ExtRat(0)
    for weight, value in zip(p, tau):
        if weight > 0:
            total = ext_add(total, ExtRat(value).scaled(weight))
    return total


def vec_ext_add(t1, t2) -> tuple:
    same_length(t1, t2)
    return tuple(ext_add(a, b) for a, b in zip(t1, t2))


def alg_leq(t1, t2) -> bool:
    """The algebraic order on [0, inf]^n: some t3 with t1 + t3 = t2.

    Coordinatewise comparison is equivalent: the witness is the
    coordinatewise difference (anything at infinite coordinates).
    """
    same_length(t1, t2)
    return all(ExtRat(a) <= ExtRat(b) for a, b in zip(t1, t2))


def meet_pointwise(t1, t2) -> tuple:
    same_length(t1, t2)
    return tuple(ext_min(a, b) for a, b in zip(t1, t2))


def join_pointwise(t1, t2) -> tuple:
    same_length(t1, t2)
    return tuple(ext_max(a, b) for a, b in zip(t1, t2))


# ---------------------------------------------------------------------------
# Riesz decomposition for finite functionals


def riesz_decompose(f, g, h):
    """Split f <= g + h into f = g_hat + h_hat with g_hat <= g, h_hat <= h.

    All inputs are nonnegative finite functionals of equal length; the
    split is the coordinatewise one, so it is unique-as-implemented and
    exact.
    """
    f, g, h = vec(f), vec(g), vec(h)
    same_length(f, g)
    same_length(g, h)
    for i, (fi, gi, hi) in enumerate(zip(f, g, h)):
        if fi < 0 or gi < 0 or hi < 0:
            raise DomainError("riesz decomposition takes nonnegative functionals")
        if fi > gi + hi:
            raise DecompositionError(
                f"f exceeds g + h at coordinate {i + 1}: {fi} > {gi + hi}",
                witness=i + 1)
    g_hat = tuple(min(fi, gi) for fi, gi in zip(f, g))
    h_hat = tuple(fi - gh for fi, gh in zip(f, g_hat))
    return g_hat, h_hat
