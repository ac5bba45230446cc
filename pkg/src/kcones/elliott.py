"""The extended Elliott invariant: the cone X of extended-valued traces.

An element of X is a support ideal together with a compatible finite trace
on it; everything outside the support is implicitly infinite.  Optional
phantom rays present trace directions invisible to K0 (projectionless
phenomena); a nonzero phantom part pairs to infinity with every nonzero
positive K0 class.

The lattice structure is computed two ways: joins and the order come from
the defining formulas, while binary meets run an exact minimization over
decomposition polytopes (the dual description of the infimum), with a
closed-form gluing oracle available for block-structured families.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionError, DomainError, ExtensionError, GluingConflictError,
                     GluingError, UnboundedError)
from .groups import (FinAbGroup, K1Hom, PositiveHom, Report, ScaledOrderedGroup,
                     Violation, support, validate_k1_hom, validate_scaled_hom)
from .linalg import (Mat, ZERO, fiber_minimum, fr, lp_min, unit, vec, vec_add,
                     vec_dot, vec_leq, vec_max, vec_min, vec_scale)
from .rationals import INF, ExtRat
from .stevens import DeltaFamily, validate_family


@dataclass(frozen=True)
class XElement:
    """A point of X: support ideal, finite trace on it, phantom coordinates."""

    support: frozenset
    finite: tuple
    phantom: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "finite", vec(self.finite))
        object.__setattr__(self, "phantom", vec(self.phantom))
        if any(x < 0 for x in self.finite) or any(x < 0 for x in self.phantom):
            raise DomainError("trace coordinates are nonnegative")

    @property
    def has_phantom(self) -> bool:
        return any(x > 0 for x in self.phantom)


@dataclass(frozen=True, eq=False)
class TraceConeX:
    """The extended trace cone over a Delta family, plus phantom rays."""

    family: DeltaFamily
    phantom_dim: int = 0

    def __post_init__(self):
        if self.phantom_dim < 0:
            raise DomainError("phantom dimension must be nonnegative")

    def __eq__(self, other):
        if not isinstance(other, TraceConeX):
            return NotImplemented
        return self.phantom_dim == other.phantom_dim and self.family == other.family

    # -- construction -------------------------------------------------------

    def element(self, support_set, finite, phantom=None) -> XElement:
        s = frozenset(support_set)
        if s not in self.family.dims:
            raise DimensionError(f"unknown support {sorted(s)}")
        finite = vec(finite)
        if len(finite) != self.family.dim(s):
            raise DimensionError("finite part length does not match the support cone")
        phantom = vec(phantom) if phantom is not None else tuple(ZERO for _ in range(self.phantom_dim))
        if len(phantom) != self.phantom_dim:
            raise DimensionError("phantom part has the wrong length")
        return XElement(s, finite, phantom)

    def zero(self) -> XElement:
        full = frozenset(range(1, self.family.rank + 1))
        return self.element(full, [ZERO] * self.family.dim(full))

    def extend_by_infinity(self, finite, support_set) -> XElement:
        """The trace that is ``finite`` on the given support and infinite outside."""
        return self.element(support_set, finite)

    # -- pairing -------------------------------------------------------------

    def eval_pairing(self, q, x: XElement) -> ExtRat:
        """Evaluate the trace x at the positive K0 element q."""
        if len(q) != self.family.rank:
            raise DimensionError("K0 element length must equal the rank")
        if any(v < 0 for v in q):
            raise DomainError("pairing takes nonnegative K0 elements")
        sq = support(q)
        if not sq:
            return ExtRat(0)
        if x.has_phantom or not sq <= x.support:
            return INF
        restricted = self.family.restriction(x.support, sq).apply(x.finite)
        return ExtRat(vec_dot(self.family.pairing_of(sq, q), restricted))

    # -- cone structure ------------------------------------------------------

    def add(self, x: XElement, y: XElement) -> XElement:
        s = x.support & y.support
        fx = self.family.restriction(x.support, s).apply(x.finite)
        fy = self.family.restriction(y.support, s).apply(y.finite)
        return XElement(s, vec_add(fx, fy), vec_add(x.phantom, y.phantom))

    def scale(self, alpha, x: XElement) -> XElement:
        alpha = fr(alpha)
        if alpha <= 0:
            raise DomainError("cone scalars are strictly positive")
        return XElement(x.support, vec_scale(alpha, x.finite), vec_scale(alpha, x.phantom))

    def leq(self, x: XElement, y: XElement) -> bool:
        """x below y: larger support, dominated on y's support, phantom below."""
        if not y.support <= x.support:
            return False
        restricted = self.family.restriction(x.support, y.support).apply(x.finite)
        return vec_leq(restricted, y.finite) and vec_leq(x.phantom, y.phantom)

    def join(self, x: XElement, y: XElement) -> XElement:
        s = x.support & y.support
        fx = self.family.restriction(x.support, s).apply(x.finite)
        fy = self.family.restriction(y.support, s).apply(y.finite)
        return XElement(s, vec_max(fx, fy), vec_max(x.phantom, y.phantom))

    def meet(self, x: XElement, y: XElement) -> XElement:
        """Greatest lower bound: exact infimum over decomposition polytopes."""
        union = x.support | y.support
        dim = self.family.dim(union)
        psi = tuple(self.meet_value(x, y, union, unit(dim, j)) for j in range(dim))
        return XElement(union, psi, vec_min(x.phantom, y.phantom))

    def meet_value(self, x: XElement, y: XElement, home: frozenset, f) -> Fraction:
        """The infimum defining the meet, for a functional f living over ``home``.

        Every way of writing f as pullbacks from the two supports (and the
        overlap, where the pointwise meet is already available) gives an
        upper estimate; the infimum over the polytope of such splittings is
        attained at a vertex and computed exactly.
        """
        f = vec(f)
        if len(f) != self.family.dim(home):
            raise DimensionError("functional length does not match its home cone")
        a1 = x.support & home
        a2 = y.support & home
        t = a1 & a2
        lam1 = self.family.restriction(home, a1)
        lam2 = self.family.restriction(home, a2)
        lam_t = self.family.restriction(home, t)
        tau = self.family.restriction(x.support, a1).apply(x.finite)
        phi = self.family.restriction(y.support, a2).apply(y.finite)
        overlap = vec_min(self.family.restriction(x.support, t).apply(x.finite),
                          self.family.restriction(y.support, t).apply(y.finite))
        d1, d2, dt = lam1.rows, lam2.rows, lam_t.rows
        cost = list(tau) + list(phi) + list(overlap)
        rows = []
        for j in range(len(f)):
            rows.append([lam1.entry(i, j) for i in range(d1)]
                        + [lam2.entry(i, j) for i in range(d2)]
                        + [lam_t.entry(i, j) for i in range(dt)])
        res = lp_min(cost, rows, f)
        if res is None:
            raise UnboundedError(
                "meet infimum has an empty decomposition polytope: invalid family")
        return res[0]

    def closed_form_meet(self, x: XElement, y: XElement):
        """Blockwise-minimum oracle, via gluing; None when the family cannot express it."""
        t = x.support & y.support
        parts = [
            (x.support - y.support,
             self.family.restriction(x.support, x.support - y.support).apply(x.finite)),
            (y.support - x.support,
             self.family.restriction(y.support, y.support - x.support).apply(y.finite)),
            (t, vec_min(self.family.restriction(x.support, t).apply(x.finite),
                        self.family.restriction(y.support, t).apply(y.finite))),
        ]
        try:
            glued = self.glue_partial_traces(parts)
        except (GluingConflictError, GluingError, ExtensionError):
            return None
        return XElement(glued.support, glued.finite, vec_min(x.phantom, y.phantom))

    # -- extensions and gluing -----------------------------------------------

    def minimal_extension(self, finite, support_set, larger) -> tuple:
        """The least cone element over ``larger`` restricting to ``finite``."""
        s = frozenset(support_set)
        big = frozenset(larger)
        if not s <= big:
            raise DimensionError("extension target must contain the source support")
        lam = self.family.restriction(big, s)
        finite = vec(finite)
        if len(finite) != lam.rows:
            raise DimensionError("element length does not match the source cone")
        point = fiber_minimum(lam.data, finite, lam.cols)
        if point is None:
            raise ExtensionError(
                f"no minimal extension from {sorted(s)} to {sorted(big)}")
        return point

    def restrict_x(self, x: XElement, support_set) -> tuple:
        """The finite trace x induces on (its support intersected with) a corner."""
        target = frozenset(support_set) & x.support
        return self.family.restriction(x.support, target).apply(x.finite)

    def glue_partial_traces(self, parts) -> XElement:
        """Assemble consistent finite traces on pieces into one minimal element.

        Pairwise agreement on overlaps is checked first (a conflict names
        the offending pair); the candidate is the join of the minimal
        extensions, with a joint-fiber solve as fallback, and the result
        restricts back to every part exactly.
        """
        parts = [(frozenset(s), vec(v)) for s, v in parts]
        for s, v in parts:
            if len(v) != self.family.dim(s):
                raise DimensionError(f"part over {sorted(s)} has the wrong length")
            if any(c < 0 for c in v):
                raise DomainError("partial traces are nonnegative")
        for i in range(len(parts)):
            for j in range(i + 1, len(parts)):
                si, vi = parts[i]
                sj, vj = parts[j]
                t = si & sj
                left = self.family.restriction(si, t).apply(vi)
                right = self.family.restriction(sj, t).apply(vj)
                if left != right:
                    raise GluingConflictError(
                        f"parts {i + 1} and {j + 1} disagree on {sorted(t)}: "
                        f"{left} vs {right}", pair=(i, j), functional=t)
        union = frozenset().union(*(s for s, _ in parts)) if parts else frozenset()
        candidate = tuple(ZERO for _ in range(self.family.dim(union)))
        for s, v in parts:
            candidate = vec_max(candidate, self.minimal_extension(v, s, union))
        if all(self.family.restriction(union, s).apply(candidate) == v for s, v in parts):
            return self.element(union, candidate)
        rows = []
        rhs = []
        for s, v in parts:
            lam = self.family.restriction(union, s)
            rows.extend(lam.data)
            rhs.extend(v)
        point = fiber_minimum(rows, rhs, self.family.dim(union))
        if point is None:
            raise GluingError("consistent parts admit no common extension")
        return self.element(union, point)


@dataclass(frozen=True, eq=False)
class EObject:
    """An extended-Elliott presentation: K-theory data plus the trace cone X."""

    group: ScaledOrderedGroup
    k1: FinAbGroup
    cone: TraceConeX

    def __post_init__(self):
        if self.cone.family.rank != self.group.rank:
            raise DimensionError("trace cone rank must match the group rank")

    def __eq__(self, other):
        if not isinstance(other, EObject):
            return NotImplemented
        return (self.group == other.group and self.k1 == other.k1
                and self.cone == other.cone)


@dataclass(frozen=True, eq=False)
class EMorphism:
    """(theta0, theta1, zeta): zeta carries target traces back to the source.

    ``zeta[S]`` maps finite parts over the image support theta0(S) back to
    finite parts over S; ``phantom_map`` does the same for phantom rays.
    Together they present one affine map from the target X to the source X.
    """

    theta0: PositiveHom
    theta1: K1Hom
    zeta: dict
    phantom_map: Mat

    def __eq__(self, other):
        if not isinstance(other, EMorphism):
            return NotImplemented
        return (self.theta0 == other.theta0 and self.theta1 == other.theta1
                and self.zeta == other.zeta and self.phantom_map == other.phantom_map)


def pulled_support(m: EMorphism, target_support: frozenset) -> frozenset:
    """The largest source support whose image ideal sits inside the target support."""
    n = m.theta0.source_rank
    return frozenset(i for i in range(1, n + 1)
                     if m.theta0.image_support(frozenset([i])) <= target_support)


def zeta_apply(m: EMorphism, src: EObject, dst: EObject, y: XElement) -> XElement:
    """Apply the presented affine map to a target-side trace."""
    s_star = pulled_support(m, y.support)
    img = m.theta0.image_support(s_star)
    restricted = dst.cone.family.restriction(y.support, img).apply(y.finite)
    finite = m.zeta[s_star].apply(restricted)
    phantom = m.phantom_map.apply(y.phantom)
    return src.cone.element(s_star, finite, phantom)


def identity_e_morphism(obj: EObject) -> EMorphism:
    zeta = {s: Mat.identity(obj.cone.family.dim(s)) for s in obj.cone.family.supports()}
    return EMorphism(PositiveHom.identity(obj.group.rank), K1Hom.identity(obj.k1),
                     zeta, Mat.identity(obj.cone.phantom_dim))


def compose_e_morphisms(second: EMorphism, first: EMorphism) -> EMorphism:
    """second after first on objects; the trace maps compose the other way."""
    from .groups import compose_homs, compose_k1
    theta0 = compose_homs(second.theta0, first.theta0)
    theta1 = compose_k1(second.theta1, first.theta1)
    zeta = {}
    for s, mat in first.zeta.items():
        mid = first.theta0.image_support(s)
        zeta[s] = mat @ second.zeta[mid]
    return EMorphism(theta0, theta1, zeta, first.phantom_map @ second.phantom_map)


# ---------------------------------------------------------------------------
# Validation


def sample_elements(cone: TraceConeX, rng: random.Random, count: int) -> list:
    """Deterministic spread of X elements: mixed supports, values, phantoms."""
    supports = cone.family.supports()
    out = []
    for _ in range(count):
        s = supports[rng.randrange(len(supports))]
        finite = [Fraction(rng.randrange(0, 9), rng.randrange(1, 4))
                  for _ in range(cone.family.dim(s))]
        if cone.phantom_dim and rng.random() < 0.3:
            phantom = [Fraction(rng.randrange(0, 4)) for _ in range(cone.phantom_dim)]
        else:
            phantom = [ZERO] * cone.phantom_dim
        out.append(cone.element(s, finite, phantom))
    return out


def validate_e_object(e: EObject, sample_pairs: int = 200, seed: int = 20240119) -> Report:
    """Family conditions plus sampled lattice laws and pairing linearity."""
    bad = list(validate_family(e.cone.family).violations)
    if bad:
        return Report(tuple(bad))
    cone = e.cone
    rng = random.Random(seed)
    sample = sample_elements(cone, rng, max(8, sample_pairs // 8))
    pairs = [(sample[rng.randrange(len(sample))], sample[rng.randrange(len(sample))])
             for _ in range(sample_pairs)]

    for x, y in pairs:
        m = cone.meet(x, y)
        if not (cone.leq(m, x) and cone.leq(m, y)):
            bad.append(Violation("lattice-meet", "meet is not a lower bound"))
            break
        j = cone.join(x, y)
        if not (cone.leq(x, j) and cone.leq(y, j)):
            bad.append(Violation("lattice-join", "join is not an upper bound"))
            break
        for z in sample[:12]:
            if cone.leq(z, x) and cone.leq(z, y) and not cone.leq(z, m):
                bad.append(Violation("lattice-meet", "a common lower bound escapes the meet"))
            if cone.leq(x, z) and cone.leq(y, z) and not cone.leq(j, z):
                bad.append(Violation("lattice-join", "a common upper bound undercuts the join"))
        if bad:
            break

    n = cone.family.rank
    qs = [tuple(rng.randrange(0, 3) for _ in range(n)) for _ in range(6)]
    for x, y in pairs[:40]:
        for q1 in qs[:3]:
            for q2 in qs[3:]:
                q12 = tuple(a + b for a, b in zip(q1, q2))
                if cone.eval_pairing(q12, x) != cone.eval_pairing(q1, x) + cone.eval_pairing(q2, x):
                    bad.append(Violation("pairing-additivity", f"not additive in K0 at {q12}"))
        for q in qs[:3]:
            s = cone.add(x, y)
            if cone.eval_pairing(q, s) != cone.eval_pairing(q, x) + cone.eval_pairing(q, y):
                bad.append(Violation("pairing-additivity", f"not additive in traces at {q}"))
        if bad:
            break

    # Well-definedness of the meet infimum across pullbacks.  The identity
    # is a theorem for presentations that can express the blockwise minimum
    # of the pair; when the gluing oracle is infeasible (fused trace
    # coordinates straddling the two supports) the pair is skipped and the
    # sampled lattice laws above carry the burden instead.
    for x, y in pairs[:30]:
        closed = cone.closed_form_meet(x, y)
        if closed is None:
            continue
        if cone.meet(x, y) != closed:
            bad.append(Violation("lattice-meet",
                                 "minimization meet disagrees with the gluing oracle"))
            break
        union = x.support | y.support
        subs = [s for s in cone.family.supports() if s <= union]
        if not subs:
            continue
        big = subs[rng.randrange(len(subs))]
        smalls = [s for s in subs if s <= big]
        small = smalls[rng.randrange(len(smalls))]
        dim_small = cone.family.dim(small)
        if dim_small == 0:
            continue
        g = [Fraction(rng.randrange(0, 4)) for _ in range(dim_small)]
        pulled = cone.family.restriction(big, small).left_apply(g)
        if cone.meet_value(x, y, big, pulled) != cone.meet_value(x, y, small, g):
            bad.append(Violation(
                "meet-well-defined",
                f"infimum changes under pullback {sorted(big)} -> {sorted(small)}"))
            break
    return Report(tuple(bad))


def validate_e_morphism(m: EMorphism, src: EObject, dst: EObject,
                        samples: int = 200, seed: int = 77001) -> Report:
    """theta checks, coherence of the zeta family, compatibility, affinity."""
    bad = list(validate_scaled_hom(m.theta0, src.group, dst.group).violations)
    bad += list(validate_k1_hom(m.theta1).violations)
    if m.theta1.source != src.k1 or m.theta1.target != dst.k1:
        bad.append(Violation("k1-relation", "theta1 does not run between the stated K1 groups"))
    if bad:
        return Report(tuple(bad))
    fam_g, fam_h = src.cone.family, dst.cone.family
    supports = fam_g.supports()
    for s in supports:
        if s not in m.zeta:
            bad.append(Violation("completeness", f"missing zeta component for {sorted(s)}"))
            continue
        q = m.theta0.image_support(s)
        mat = m.zeta[s]
        if (mat.rows, mat.cols) != (fam_g.dim(s), fam_h.dim(q)):
            bad.append(Violation("completeness", f"zeta component for {sorted(s)} has the wrong shape"))
        elif not mat.is_nonnegative():
            bad.append(Violation("completeness", f"zeta component for {sorted(s)} has a negative entry"))
    if (m.phantom_map.rows, m.phantom_map.cols) != (src.cone.phantom_dim, dst.cone.phantom_dim):
        bad.append(Violation("completeness", "phantom map has the wrong shape"))
    elif not m.phantom_map.is_nonnegative():
        bad.append(Violation("completeness", "phantom map has a negative entry"))
    if bad:
        return Report(tuple(bad))

    for s_big in supports:
        q_big = m.theta0.image_support(s_big)
        for s_small in supports:
            if not s_small < s_big:
                continue
            q_small = m.theta0.image_support(s_small)
            left = fam_g.restriction(s_big, s_small) @ m.zeta[s_big]
            right = m.zeta[s_small] @ fam_h.restriction(q_big, q_small)
            if left != right:
                bad.append(Violation(
                    "coherence",
                    f"zeta components disagree across ({sorted(s_big)}, {sorted(s_small)})"))
    if bad:
        return Report(tuple(bad))

    rng = random.Random(seed)
    sample = sample_elements(dst.cone, rng, samples)
    sample.append(dst.cone.zero())
    if dst.cone.family.rank:
        empty = dst.cone.element(frozenset(), [])
        sample.append(empty)
    n = src.group.rank
    generators = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    for y in sample:
        image = zeta_apply(m, src, dst, y)
        for i, gen in enumerate(generators, start=1):
            lhs = src.cone.eval_pairing(gen, image)
            rhs = dst.cone.eval_pairing(m.theta0.column(i - 1), y)
            if lhs != rhs:
                bad.append(Violation(
                    "compatibility",
                    f"pairing of generator {i} changes across the trace map "
                    f"(support {sorted(y.support)})"))
                break
        if bad:
            break
    if bad:
        return Report(tuple(bad))

    for t in (Fraction(1, 2), Fraction(1, 3)):
        for k in range(0, min(len(sample) - 1, 60), 2):
            y1, y2 = sample[k], sample[k + 1]
            combo = dst.cone.add(dst.cone.scale(t, y1), dst.cone.scale(1 - t, y2))
            lhs = zeta_apply(m, src, dst, combo)
            rhs = src.cone.add(src.cone.scale(t, zeta_apply(m, src, dst, y1)),
                               src.cone.scale(1 - t, zeta_apply(m, src, dst, y2)))
            if lhs != rhs:
                bad.append(Violation("affinity", f"zeta is not affine at t = {t}"))
                break
        if bad:
            break
    return Report(tuple(bad))
