"""Finite presentations of scaled ordered K0 groups and K1 groups.

K0 data is simplicial: the group is Z^n ordered by the coordinatewise
positive cone N^n, with a scale that is either the whole positive cone or
a hereditary interval [0, u].  Ideals of the positive cone are then exactly
the support sets, and positivity of homomorphisms is entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapacityError, DimensionError, DomainError
from .linalg import Mat

IDEAL_RANK_GUARD = 16


@dataclass(frozen=True)
class Scale:
    """Either every positive element (kind 'all') or the interval [0, u]."""

    kind: str
    unit: tuple = ()

    def __post_init__(self):
        if self.kind not in ("all", "unit"):
            raise DomainError(f"unknown scale kind {self.kind!r}")
        if self.kind == "unit" and any(x < 0 for x in self.unit):
            raise DomainError("scale unit must be nonnegative")

    @staticmethod
    def all() -> "Scale":
        return Scale("all")

    @staticmethod
    def interval(u) -> "Scale":
        return Scale("unit", tuple(int(x) for x in u))


@dataclass(frozen=True)
class ScaledOrderedGroup:
    """(Z^n, N^n, scale): n blocks with the coordinatewise order."""

    rank: int
    scale: Scale = field(default_factory=Scale.all)

    def __post_init__(self):
        if self.rank < 0:
            raise DomainError("rank must be nonnegative")
        if self.scale.kind == "unit" and len(self.scale.unit) != self.rank:
            raise DimensionError("scale unit length must equal the rank")


@dataclass(frozen=True)
class FinAbGroup:
    """A finitely generated abelian group: Z^free_rank + Z/d1 + ... + Z/dk.

    The torsion orders form a divisibility chain d1 | d2 | ... with each
    di >= 2, which makes presentations canonical and equality structural.
    """

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise DomainError("free rank must be nonnegative")
        tors = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in tors):
            raise DomainError("torsion orders must be at least 2")
        for a, b in zip(tors, tors[1:]):
            if b % a != 0:
                raise DomainError(f"torsion orders must form a divisibility chain, got {a} then {b}")
        object.__setattr__(self, "torsion", tors)

    @property
    def generators(self) -> int:
        return self.free_rank + len(self.torsion)


@dataclass(frozen=True)
class PositiveHom:
    """An order preserving homomorphism between simplicial K0 groups.

    Presented by an integer matrix acting on column vectors; entrywise
    nonnegativity is exactly order preservation for simplicial cones.
    """

    matrix: tuple
    source_rank: int
    target_rank: int

    @staticmethod
    def from_rows(rows, source_rank=None, target_rank=None) -> "PositiveHom":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        m = len(rows)
        if m:
            n = len(rows[0])
            if any(len(r) != n for r in rows):
                raise DimensionError("ragged matrix")
        else:
            if source_rank is None:
                raise DimensionError("empty matrix needs an explicit source rank")
            n = source_rank
        if source_rank is not None and source_rank != n:
            raise DimensionError("source rank disagrees with matrix width")
        if target_rank is not None and target_rank != m:
            raise DimensionError("target rank disagrees with matrix height")
        return PositiveHom(rows, n, m)

    @staticmethod
    def identity(n: int) -> "PositiveHom":
        return PositiveHom.from_rows(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)),
                                     source_rank=n)

    def apply(self, v) -> tuple:
        if len(v) != self.source_rank:
            raise DimensionError("vector length does not match the source rank")
        return tuple(sum(r[j] * v[j] for j in range(self.source_rank)) for r in self.matrix)

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self.matrix)

    def as_mat(self) -> Mat:
        return Mat.from_rows(self.matrix, cols=self.source_rank)

    def image_support(self, s: frozenset) -> frozenset:
        """Support of the image ideal: union of the supports of columns in s."""
        out = set()
        for j in s:
            for i in range(self.target_rank):
                if self.matrix[i][j - 1] > 0:
                    out.add(i + 1)
        return frozenset(out)


@dataclass(frozen=True)
class K1Hom:
    """A homomorphism between FinAbGroup presentations, one column per source generator.

    Entries hitting torsion generators of the target are kept reduced
    modulo the torsion order, so equal maps have equal presentations.
    """

    matrix: tuple
    source: FinAbGroup
    target: FinAbGroup

    @staticmethod
    def from_rows(rows, source: FinAbGroup, target: FinAbGroup) -> "K1Hom":
        rows = [list(int(x) for x in r) for r in rows]
        if len(rows) != target.generators:
            raise DimensionError("row count must match the target generator count")
        if any(len(r) != source.generators for r in rows):
            raise DimensionError("column count must match the source generator count")
        for i, d in enumerate(target.torsion):
            ri = target.free_rank + i
            rows[ri] = [x % d for x in rows[ri]]
        return K1Hom(tuple(tuple(r) for r in rows), source, target)

    @staticmethod
    def identity(g: FinAbGroup) -> "K1Hom":
        n = g.generators
        return K1Hom.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], g, g)

    @staticmethod
    def zero(source: FinAbGroup, target: FinAbGroup) -> "K1Hom":
        return K1Hom.from_rows([[0] * source.generators for _ in range(target.generators)],
                               source, target)


# ---------------------------------------------------------------------------
# Operations


def support(p) -> frozenset:
    """The set of blocks where p is positive; presents the ideal p generates."""
    if any(x < 0 for x in p):
        raise DomainError("support is defined for nonnegative vectors")
    return frozenset(i + 1 for i, x in enumerate(p) if x > 0)


def generated_ideal(ps) -> frozenset:
    """Support of the ideal generated by a family of positive elements."""
    lengths = {len(p) for p in ps}
    if len(lengths) > 1:
        raise DimensionError("generators have mixed lengths")
    out = frozenset()
    for p in ps:
        out |= support(p)
    return out


def in_corner_group(e, p) -> bool:
    """Membership of e in the subgroup generated by {v : 0 <= v <= n p}.

    For the simplicial presentation this is exactly supp(e) within supp(p).
    """
    if len(e) != len(p):
        raise DimensionError("vector lengths differ")
    if any(x < 0 for x in p):
        raise DomainError("p must be nonnegative")
    sp = support(p)
    return all(e[i] == 0 for i in range(len(e)) if (i + 1) not in sp)


def enumerate_ideals(group: ScaledOrderedGroup) -> list:
    """All ideals of the positive cone, as supports, in lexicographic order."""
    n = group.rank
    if n > IDEAL_RANK_GUARD:
        raise CapacityError(f"rank {n} exceeds the ideal enumeration guard {IDEAL_RANK_GUARD}")
    out = []
    for mask in range(1 << n):
        out.append(frozenset(i + 1 for i in range(n) if mask >> i & 1))
    out.sort(key=lambda s: tuple(1 if (i + 1) in s else 0 for i in reversed(range(n))))
    return out


@dataclass(frozen=True)
class Violation:
    """One validator finding: a short code plus a located detail."""

    code: str
    detail: str


@dataclass(frozen=True)
class Report:
    """A collected list of violations; empty means the check passed."""

    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> tuple:
        return tuple(sorted({v.code for v in self.violations}))

    def __bool__(self):
        return self.ok


def validate_scaled_hom(hom: PositiveHom, source: ScaledOrderedGroup,
                        target: ScaledOrderedGroup) -> Report:
    """Positivity plus scale preservation.

    For interval scales the hereditary structure makes the single check
    M u_G <= u_H equivalent to elementwise preservation; an 'all' source
    scale fits in an interval target only for the zero map.
    """
    bad = []
    if hom.source_rank != source.rank or hom.target_rank != target.rank:
        bad.append(Violation("shape", "matrix shape does not match the group ranks"))
        return Report(tuple(bad))
    for i, row in enumerate(hom.matrix):
        for j, x in enumerate(row):
            if x < 0:
                bad.append(Violation("positivity", f"negative entry at ({i + 1},{j + 1})"))
    if bad:
        return Report(tuple(bad))
    skind, tkind = source.scale.kind, target.scale.kind
    if skind == "unit" and tkind == "unit":
        image = hom.apply(source.scale.unit)
        for i, (got, bound) in enumerate(zip(image, target.scale.unit)):
            if got > bound:
                bad.append(Violation("scale", f"scale breach at coordinate {i + 1}: {got} > {bound}"))
    elif skind == "all" and tkind == "unit":
        if any(x != 0 for row in hom.matrix for x in row):
            bad.append(Violation("scale", "an unbounded scale only maps into an interval scale via 0"))
    return Report(tuple(bad))


def compose_homs(second: PositiveHom, first: PositiveHom) -> PositiveHom:
    """Matrix composition: (second . first)."""
    if first.target_rank != second.source_rank:
        raise DimensionError("homomorphism ranks do not align")
    rows = tuple(tuple(sum(second.matrix[i][k] * first.matrix[k][j]
                           for k in range(second.source_rank))
                       for j in range(first.source_rank))
                 for i in range(second.target_rank))
    return PositiveHom.from_rows(rows, source_rank=first.source_rank)


def validate_k1_hom(hom: K1Hom) -> Report:
    """Each torsion generator's image must satisfy the target relations."""
    bad = []
    src, tgt = hom.source, hom.target
    for j, d in enumerate(src.torsion):
        col = j + src.free_rank
        for i in range(tgt.free_rank):
            if d * hom.matrix[i][col] != 0:
                bad.append(Violation("k1-relation",
                                     f"generator {col + 1} of order {d} maps to infinite order"))
                break
        else:
            for i, order in enumerate(tgt.torsion):
                if (d * hom.matrix[tgt.free_rank + i][col]) % order != 0:
                    bad.append(Violation(
                        "k1-relation",
                        f"{d} times the image of generator {col + 1} is nonzero mod {order}"))
                    break
    return Report(tuple(bad))


def compose_k1(second: K1Hom, first: K1Hom) -> K1Hom:
    if first.target != second.source:
        raise DimensionError("K1 homomorphisms do not compose: middle groups differ")
    rows = [[sum(second.matrix[i][k] * first.matrix[k][j] for k in range(second.source.generators))
             for j in range(first.source.generators)]
            for i in range(second.target.generators)]
    return K1Hom.from_rows(rows, first.source, second.target)


def support_key(s: frozenset):
    """Canonical sort key for supports: by size, then lexicographically."""
    return (len(s), tuple(sorted(s)))
