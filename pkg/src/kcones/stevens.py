"""The Stevens invariant: families of finite-trace cones over the ideal lattice.

A DeltaFamily attaches one simplicial cone to every support set, with
restriction maps between nested supports and a pairing functional for each
block generator.  Validation checks the four compatibility conditions that
make such a family a Stevens-invariant presentation:

  1. restrictions compose,
  2. pairings are stable under restriction,
  3. restriction pullbacks are hereditary (every functional dominated by a
     pulled-back functional is itself pulled back),
  4. functionals on a union support decompose over the two pieces,

plus strict positivity of every base functional.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cones import SimplicialCone, simplex_base_check
from .errors import DecompositionError, DimensionError, DomainError, ExtensionError
from .groups import (FinAbGroup, K1Hom, PositiveHom, Report, ScaledOrderedGroup,
                     Violation, support_key, validate_k1_hom, validate_scaled_hom)
from .linalg import (Mat, ZERO, cone_member, fiber_minimum, fr, lp_min, unit, vec,
                     vec_dot, vec_leq)


@dataclass(frozen=True, eq=False)
class DeltaFamily:
    """Cones, restrictions, and pairings indexed by support sets.

    ``dims[S]`` is the dimension of the cone over S; ``restrictions[(S, S')]``
    (for S' strictly inside S) maps cone elements over S to cone elements
    over S'; ``pairings[S][i]`` is the functional that evaluates traces at
    the i-th block generator.
    """

    rank: int
    dims: dict
    restrictions: dict
    pairings: dict

    def supports(self) -> list:
        return sorted(self.dims, key=support_key)

    def dim(self, s: frozenset) -> int:
        if s not in self.dims:
            raise DimensionError(f"unknown support {sorted(s)}")
        return self.dims[s]

    def restriction(self, s: frozenset, sub: frozenset) -> Mat:
        if not sub <= s:
            raise DimensionError(f"supports not nested: {sorted(sub)} inside {sorted(s)}")
        if sub == s:
            return Mat.identity(self.dim(s))
        key = (s, sub)
        if key not in self.restrictions:
            raise DimensionError(f"missing restriction {sorted(s)} -> {sorted(sub)}")
        return self.restrictions[key]

    def pairing(self, s: frozenset, i: int) -> tuple:
        return self.pairings[s][i]

    def pairing_of(self, s: frozenset, e) -> tuple:
        """The functional for an integer combination e supported inside s."""
        if len(e) != self.rank:
            raise DimensionError("group element length must equal the rank")
        row = [ZERO] * self.dim(s)
        for i, coeff in enumerate(e, start=1):
            if coeff != 0:
                if i not in s:
                    raise DomainError(f"element touches block {i} outside the support")
                prow = self.pairing(s, i)
                row = [acc + coeff * x for acc, x in zip(row, prow)]
        return tuple(row)

    def base_functional(self, s: frozenset) -> tuple:
        row = [ZERO] * self.dim(s)
        for i in s:
            row = [acc + x for acc, x in zip(row, self.pairings[s][i])]
        return tuple(row)

    def cone(self, s: frozenset) -> SimplicialCone:
        return SimplicialCone(self.dim(s), self.base_functional(s))

    def __eq__(self, other):
        if not isinstance(other, DeltaFamily):
            return NotImplemented
        return (self.rank == other.rank and self.dims == other.dims
                and self.restrictions == other.restrictions
                and self.pairings == other.pairings)


def all_supports(n: int) -> list:
    out = [frozenset(i + 1 for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    return sorted(out, key=support_key)


def coordinate_family(n: int, weights=None) -> DeltaFamily:
    """The canonical model: one ray per block, restrictions are projections."""
    return class_family(n, classes=None, weights=weights)


def class_family(n: int, classes=None, weights=None, twists=None) -> DeltaFamily:
    """A family whose rays are classes of blocks, optionally twisted.

    ``classes`` maps each block to a class id (blocks sharing a class share
    a trace coordinate); ``weights`` scales the pairing of each block;
    ``twists`` optionally conjugates each cone by a monomial matrix (a
    permutation with positive scalings), which preserves all four family
    conditions while leaving the coordinate picture behind.
    """
    classes = list(classes) if classes is not None else list(range(1, n + 1))
    if len(classes) != n:
        raise DimensionError("one class per block required")
    weights = [fr(w) for w in (weights if weights is not None else [1] * n)]
    if len(weights) != n or any(w <= 0 for w in weights):
        raise DomainError("weights must be strictly positive, one per block")

    def class_list(s):
        return sorted({classes[i - 1] for i in s})

    dims = {}
    restrictions = {}
    pairings = {}
    supports = all_supports(n)
    for s in supports:
        cls = class_list(s)
        dims[s] = len(cls)
        index = {c: k for k, c in enumerate(cls)}
        pairings[s] = {i: tuple(weights[i - 1] if index[classes[i - 1]] == k else ZERO
                                for k in range(len(cls)))
                       for i in s}
    for s in supports:
        cls = class_list(s)
        for sub in supports:
            if sub < s:
                sub_cls = class_list(sub)
                rows = [[fr(1) if c == c_sub else ZERO for c in cls] for c_sub in sub_cls]
                restrictions[(s, sub)] = Mat.from_rows(rows, cols=len(cls))
    family = DeltaFamily(n, dims, restrictions, pairings)
    if twists:
        family = twist_family(family, twists)
    return family


def monomial_matrix(perm, scales) -> Mat:
    """perm maps new ray k to old ray perm[k]; scales multiply along the way."""
    k = len(perm)
    rows = [[fr(scales[i]) if perm[i] == j else ZERO for j in range(k)] for i in range(k)]
    return Mat.from_rows(rows, cols=k)


def _monomial_inverse(m: Mat) -> Mat:
    rows = [[ZERO] * m.rows for _ in range(m.cols)]
    for i in range(m.rows):
        hits = [(j, x) for j, x in enumerate(m.row(i)) if x != 0]
        if len(hits) != 1:
            raise DomainError("twists must be monomial matrices")
        j, x = hits[0]
        rows[j][i] = 1 / x
    return Mat.from_rows(rows, cols=m.rows)


def twist_family(family: DeltaFamily, twists: dict) -> DeltaFamily:
    """Conjugate every cone by its monomial twist (identity where omitted)."""
    def twist(s):
        return twists.get(s, Mat.identity(family.dim(s)))

    dims = dict(family.dims)
    restrictions = {}
    pairings = {}
    inverses = {s: _monomial_inverse(twist(s)) for s in family.supports()}
    for (s, sub), lam in family.restrictions.items():
        restrictions[(s, sub)] = twist(sub) @ lam @ inverses[s]
    for s in family.supports():
        inv = inverses[s]
        pairings[s] = {i: inv.left_apply(row) for i, row in family.pairings[s].items()}
    return DeltaFamily(family.rank, dims, restrictions, pairings)


# ---------------------------------------------------------------------------
# Family-context operations


def restrict(v, s: frozenset, sub: frozenset, family: DeltaFamily) -> tuple:
    """Push a cone element over S down to a nested support."""
    v = vec(v)
    if len(v) != family.dim(s):
        raise DimensionError("element length does not match the cone over S")
    if any(x < 0 for x in v):
        raise DomainError("cone elements are nonnegative")
    return family.restriction(s, sub).apply(v)


def minimal_section(family: DeltaFamily, sub: frozenset, sup: frozenset) -> list:
    """Images of the sub-cone's rays under the least section of the restriction.

    Entry k is the coordinatewise minimum of the fiber over the k-th ray of
    the cone over ``sub``; raises ExtensionError when a fiber is empty or
    has no least element.
    """
    lam = family.restriction(sup, sub)
    out = []
    for k in range(lam.rows):
        point = fiber_minimum(lam.data, unit(lam.rows, k), lam.cols)
        if point is None:
            raise ExtensionError(
                f"no minimal lift of ray {k + 1} from {sorted(sub)} into {sorted(sup)}")
        out.append(point)
    return out


def hereditary_lift(f, g, sub: frozenset, sup: frozenset, family: DeltaFamily) -> tuple:
    """Lift g (a functional below f across the restriction) to the larger cone.

    Rays of the big cone that survive restriction take g's value there;
    rays the restriction kills keep f's value.  The result h satisfies
    h <= f and agrees with g along the least section.
    """
    lam = family.restriction(sup, sub)
    f = vec(f)
    g = vec(g)
    if len(f) != lam.cols or len(g) != lam.rows:
        raise DimensionError("functional lengths do not match the restriction")
    section = minimal_section(family, sub, sup)
    for k, point in enumerate(section):
        if vec_dot(f, point) < g[k]:
            raise DomainError(
                f"precondition failed: f misses g on ray {k + 1} of {sorted(sub)}")
    pulled = lam.left_apply(g)
    h = tuple(pulled[j] if any(lam.entry(i, j) != 0 for i in range(lam.rows)) else f[j]
              for j in range(lam.cols))
    for k, point in enumerate(section):
        if vec_dot(h, point) != g[k]:
            raise ExtensionError(
                f"hereditary lift fails on ray {k + 1} of {sorted(sub)}: family is not hereditary")
    if not vec_leq(h, f):
        raise ExtensionError("hereditary lift exceeds the dominating functional")
    return h


def decompose_over_union(f, p, q, family: DeltaFamily):
    """Split a functional on the union support into pullbacks from the pieces.

    Rays surviving into supp(p) go to the first part (the overlap tie-break),
    rays surviving only into supp(q) to the second; a ray carrying weight
    that survives into neither makes the decomposition impossible.
    """
    from .groups import support as _support
    s1, s2 = _support(p), _support(q)
    union = s1 | s2
    f = vec(f)
    if len(f) != family.dim(union):
        raise DimensionError("functional length does not match the union cone")
    lam1 = family.restriction(union, s1)
    lam2 = family.restriction(union, s2)
    n = family.dim(union)
    target1 = [ZERO] * n
    target2 = [ZERO] * n
    for j in range(n):
        in1 = any(lam1.entry(i, j) != 0 for i in range(lam1.rows))
        in2 = any(lam2.entry(i, j) != 0 for i in range(lam2.rows))
        if in1:
            target1[j] = f[j]
        elif in2:
            target2[j] = f[j]
        elif f[j] != 0:
            raise DecompositionError(
                f"ray {j + 1} of the union cone is invisible to both pieces",
                witness=j + 1)
    f1 = _solve_pullback(lam1, target1)
    f2 = _solve_pullback(lam2, target2)
    if f1 is None or f2 is None:
        raise DecompositionError("no nonnegative pullback decomposition exists",
                                 witness=(tuple(sorted(s1)), tuple(sorted(s2))))
    left = lam1.left_apply(f1)
    right = lam2.left_apply(f2)
    if tuple(a + b for a, b in zip(left, right)) != tuple(f):
        raise DecompositionError("pullback identity failed after the split",
                                 witness=(tuple(sorted(s1)), tuple(sorted(s2))))
    return f1, f2


def _solve_pullback(lam: Mat, target):
    """Nonnegative h with h . lam == target, deterministically, or None."""
    rows = [[lam.entry(i, j) for i in range(lam.rows)] for j in range(lam.cols)]
    res = lp_min([fr(1)] * lam.rows, rows, target)
    return None if res is None else res[1]


# ---------------------------------------------------------------------------
# Objects and morphisms


@dataclass(frozen=True, eq=False)
class SObject:
    """A Stevens-invariant presentation: K-theory data plus a Delta family."""

    group: ScaledOrderedGroup
    k1: FinAbGroup
    family: DeltaFamily

    def __post_init__(self):
        if self.family.rank != self.group.rank:
            raise DimensionError("family rank must match the group rank")

    def __eq__(self, other):
        if not isinstance(other, SObject):
            return NotImplemented
        return (self.group == other.group and self.k1 == other.k1
                and self.family == other.family)


@dataclass(frozen=True, eq=False)
class SMorphism:
    """(theta0, theta1, xi): xi[S] carries target-side finite traces back.

    For each source support S, ``xi[S]`` maps cone elements over the image
    support theta0(S) on the target side to cone elements over S on the
    source side.
    """

    theta0: PositiveHom
    theta1: K1Hom
    xi: dict

    def __eq__(self, other):
        if not isinstance(other, SMorphism):
            return NotImplemented
        return (self.theta0 == other.theta0 and self.theta1 == other.theta1
                and self.xi == other.xi)


def validate_s_object(s: SObject) -> Report:
    """Check the four family conditions and every base simplex."""
    return validate_family(s.family)


def validate_family(fam: DeltaFamily) -> Report:
    bad = []
    supports = set(all_supports(fam.rank))
    if set(fam.dims) != supports:
        bad.append(Violation("family-shape", "cones must be indexed by every support set"))
        return Report(tuple(bad))
    if fam.dims[frozenset()] != 0:
        bad.append(Violation("family-shape", "the empty support carries the point cone"))
    for (sup, sub), lam in fam.restrictions.items():
        if not sub < sup:
            bad.append(Violation("family-shape", f"restriction {sorted(sup)} -> {sorted(sub)} is not nested"))
        elif (lam.rows, lam.cols) != (fam.dims[sub], fam.dims[sup]):
            bad.append(Violation("family-shape", f"restriction {sorted(sup)} -> {sorted(sub)} has the wrong shape"))
        elif not lam.is_nonnegative():
            bad.append(Violation("family-shape", f"restriction {sorted(sup)} -> {sorted(sub)} has a negative entry"))
    for sup in sorted(supports, key=support_key):
        for sub in sorted(supports, key=support_key):
            if sub < sup and (sup, sub) not in fam.restrictions:
                bad.append(Violation("family-shape", f"missing restriction {sorted(sup)} -> {sorted(sub)}"))
        seen = fam.pairings.get(sup, {})
        if set(seen) != set(sup):
            bad.append(Violation("family-shape", f"pairings over {sorted(sup)} must cover exactly its blocks"))
        for i, row in seen.items():
            if len(row) != fam.dims[sup]:
                bad.append(Violation("family-shape", f"pairing ({sorted(sup)}, {i}) has the wrong length"))
            elif any(x < 0 for x in row):
                bad.append(Violation("family-shape", f"pairing ({sorted(sup)}, {i}) has a negative entry"))
    if bad:
        return Report(tuple(bad))

    ordered = sorted(supports, key=support_key)
    # (1) restrictions compose
    for s_big in ordered:
        for s_mid in ordered:
            if not s_mid < s_big:
                continue
            lam_big_mid = fam.restriction(s_big, s_mid)
            for s_small in ordered:
                if not s_small < s_mid:
                    continue
                direct = fam.restriction(s_big, s_small)
                via = fam.restriction(s_mid, s_small) @ lam_big_mid
                if direct != via:
                    bad.append(Violation(
                        "condition-1",
                        f"restrictions do not compose along {sorted(s_big)} -> {sorted(s_mid)} -> {sorted(s_small)}"))
    # (2) pairings restrict
    for s_big in ordered:
        for s_small in ordered:
            if not s_small < s_big:
                continue
            lam = fam.restriction(s_big, s_small)
            for i in sorted(s_small):
                if lam.left_apply(fam.pairing(s_small, i)) != fam.pairing(s_big, i):
                    bad.append(Violation(
                        "condition-2",
                        f"pairing of block {i} is unstable under {sorted(s_big)} -> {sorted(s_small)}"))
    # (3) hereditary pullbacks: every surviving ray functional lifts
    for s_big in ordered:
        for s_small in ordered:
            if not s_small < s_big:
                continue
            lam = fam.restriction(s_big, s_small)
            for j in range(lam.cols):
                if all(lam.entry(i, j) == 0 for i in range(lam.rows)):
                    continue
                if cone_member(unit(lam.cols, j), lam.data) is None:
                    bad.append(Violation(
                        "condition-3",
                        f"ray {j + 1} over {sorted(s_big)} is dominated by a pullback from "
                        f"{sorted(s_small)} but is not one"))
    # (4) decomposition over unions
    for s1 in ordered:
        for s2 in ordered:
            if s1 <= s2 or s2 <= s1 or support_key(s1) > support_key(s2):
                continue
            union = s1 | s2
            lam1 = fam.restriction(union, s1)
            lam2 = fam.restriction(union, s2)
            gens = list(lam1.data) + list(lam2.data)
            for j in range(fam.dims[union]):
                if cone_member(unit(fam.dims[union], j), gens) is None:
                    bad.append(Violation(
                        "condition-4",
                        f"ray functional {j + 1} on {sorted(union)} does not decompose over "
                        f"{sorted(s1)} and {sorted(s2)}"))
    # base simplices
    for s in ordered:
        report = simplex_base_check(fam.cone(s))
        for v in report.violations:
            bad.append(Violation("simplex-base", f"over {sorted(s)}: {v.detail}"))
    return Report(tuple(bad))


def validate_s_morphism(m: SMorphism, src: SObject, dst: SObject) -> Report:
    """theta checks, completeness, commuting squares, pairing compatibility."""
    bad = list(validate_scaled_hom(m.theta0, src.group, dst.group).violations)
    bad += list(validate_k1_hom(m.theta1).violations)
    if m.theta1.source != src.k1 or m.theta1.target != dst.k1:
        bad.append(Violation("k1-relation", "theta1 does not run between the stated K1 groups"))
    if bad:
        return Report(tuple(bad))
    fam_g, fam_h = src.family, dst.family
    supports = sorted(all_supports(src.group.rank), key=support_key)
    for s in supports:
        if s not in m.xi:
            bad.append(Violation("completeness", f"missing xi component for {sorted(s)}"))
            continue
        q = m.theta0.image_support(s)
        mat = m.xi[s]
        if (mat.rows, mat.cols) != (fam_g.dim(s), fam_h.dim(q)):
            bad.append(Violation("completeness", f"xi component for {sorted(s)} has the wrong shape"))
        elif not mat.is_nonnegative():
            bad.append(Violation("completeness", f"xi component for {sorted(s)} has a negative entry"))
    if bad:
        return Report(tuple(bad))
    for s_big in supports:
        q_big = m.theta0.image_support(s_big)
        for s_small in supports:
            if not s_small < s_big:
                continue
            q_small = m.theta0.image_support(s_small)
            left = fam_g.restriction(s_big, s_small) @ m.xi[s_big]
            right = m.xi[s_small] @ fam_h.restriction(q_big, q_small)
            if left != right:
                bad.append(Violation(
                    "square",
                    f"restriction square fails at ({sorted(s_big)}, {sorted(s_small)})"))
    for s in supports:
        q = m.theta0.image_support(s)
        for i in sorted(s):
            lhs = m.xi[s].left_apply(fam_g.pairing(s, i))
            col = m.theta0.column(i - 1)
            rhs = [ZERO] * fam_h.dim(q)
            for block, mult in enumerate(col, start=1):
                if mult:
                    rhs = [acc + mult * x for acc, x in zip(rhs, fam_h.pairing(q, block))]
            if lhs != tuple(rhs):
                bad.append(Violation(
                    "compatibility",
                    f"pairing compatibility fails for block {i} over {sorted(s)}"))
    return Report(tuple(bad))


def compose_s_morphisms(second: SMorphism, first: SMorphism) -> SMorphism:
    """second after first; xi components compose contravariantly."""
    from .groups import compose_homs, compose_k1
    theta0 = compose_homs(second.theta0, first.theta0)
    theta1 = compose_k1(second.theta1, first.theta1)
    xi = {}
    for s, mat in first.xi.items():
        mid = first.theta0.image_support(s)
        xi[s] = mat @ second.xi[mid]
    return SMorphism(theta0, theta1, xi)


def identity_s_morphism(obj: SObject) -> SMorphism:
    xi = {s: Mat.identity(obj.family.dim(s)) for s in obj.family.supports()}
    return SMorphism(PositiveHom.identity(obj.group.rank), K1Hom.identity(obj.k1), xi)
