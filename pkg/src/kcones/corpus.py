"""Seeded random generators and the named verification corpus.

The corpus holds coordinate models, an AF-like two-ideal example, the
projectionless counterexample entry, and one mutant per validator check,
each with its expected verdicts.  Random objects come from class families:
blocks are fused into trace classes, weighted, and each cone is conjugated
by a random monomial matrix, which produces non-coordinate presentations
that satisfy the family conditions by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .documents import Document, MorphismBundle, document_of
from .elliott import EMorphism, EObject, TraceConeX, validate_e_morphism, validate_e_object
from .errors import CapacityError, GenerationError
from .functors import elliott_to_stevens, has_ideal_property, roundtrip_object
from .groups import FinAbGroup, K1Hom, PositiveHom, Scale, ScaledOrderedGroup
from .linalg import Mat, fr
from .stevens import (DeltaFamily, SMorphism, SObject, class_family, coordinate_family,
                      monomial_matrix, twist_family, validate_s_morphism, validate_s_object)

MAX_BLOCKS = 6
MAX_CONE_DIM = 4
GENERATION_ATTEMPTS = 32

_WEIGHTS = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(3, 2), Fraction(1, 3)]
_SCALES = [Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3)]
_TORSIONS = [(), (2,), (3,), (2, 2), (2, 4), (2, 6), (4,)]


@dataclass(frozen=True)
class FamilySpec:
    """Enough data to rebuild a class family and align morphisms with it."""

    classes: tuple
    weights: tuple
    twists: dict

    def family(self) -> DeltaFamily:
        base = class_family(len(self.classes), self.classes, self.weights)
        return twist_family(base, self.twists)


def _random_spec(rng: random.Random, n: int, cone_dim: int) -> FamilySpec:
    if n == 0:
        return FamilySpec((), (), {})
    m = max(1, min(n, cone_dim))
    classes = list(range(1, m + 1)) + [rng.randint(1, m) for _ in range(n - m)]
    rng.shuffle(classes)
    weights = tuple(rng.choice(_WEIGHTS) for _ in range(n))
    twists = {}
    plain = class_family(n, classes, weights)
    for s in plain.supports():
        k = plain.dim(s)
        if k and rng.random() < 0.5:
            perm = list(range(k))
            rng.shuffle(perm)
            scales = [rng.choice(_SCALES) for _ in range(k)]
            twists[s] = monomial_matrix(tuple(perm), tuple(scales))
    return FamilySpec(tuple(classes), weights, twists)


def _random_group(rng: random.Random, n: int) -> ScaledOrderedGroup:
    if rng.random() < 0.5:
        return ScaledOrderedGroup(n, Scale.all())
    return ScaledOrderedGroup(n, Scale.interval([rng.randint(0, 3) for _ in range(n)]))


def _random_k1(rng: random.Random) -> FinAbGroup:
    return FinAbGroup(rng.randint(0, 2), rng.choice(_TORSIONS))


def _check_bounds(blocks: int, cone_dim: int):
    if not 0 <= blocks <= MAX_BLOCKS:
        raise CapacityError(f"blocks must be between 0 and {MAX_BLOCKS}")
    if not 1 <= cone_dim <= MAX_CONE_DIM:
        raise CapacityError(f"cone_dim must be between 1 and {MAX_CONE_DIM}")


def _derive_target(rng: random.Random, n: int, src: FamilySpec, cone_dim: int):
    """A permuted, re-twisted copy of the source spec plus the matrices onto it."""
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    mult = rng.choice([1, 1, 2])
    classes = [0] * n
    weights = [Fraction(0)] * n
    for i in range(1, n + 1):
        classes[perm[i - 1] - 1] = src.classes[i - 1] if n else 0
        weights[perm[i - 1] - 1] = src.weights[i - 1]
    plain = class_family(n, classes, weights) if n else coordinate_family(0)
    twists = {}
    for s in plain.supports():
        k = plain.dim(s)
        if k and rng.random() < 0.5:
            p = list(range(k))
            rng.shuffle(p)
            twists[s] = monomial_matrix(tuple(p), tuple(rng.choice(_SCALES) for _ in range(k)))
    dst = FamilySpec(tuple(classes), tuple(weights), twists)

    theta_rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        theta_rows[perm[i - 1] - 1][i - 1] = mult
    theta0 = PositiveHom.from_rows(theta_rows, source_rank=n)

    components = {}
    src_plain = class_family(n, list(src.classes), list(src.weights)) if n else coordinate_family(0)
    for s in src_plain.supports():
        img = frozenset(perm[i - 1] for i in s)
        k = src_plain.dim(s)
        raw = Mat.from_rows([[fr(mult) if i == j else 0 for j in range(k)] for i in range(k)],
                            cols=k)
        t_src = src.twists.get(s, Mat.identity(k))
        t_dst = dst.twists.get(img, Mat.identity(k))
        from .stevens import _monomial_inverse
        components[s] = t_src @ raw @ _monomial_inverse(t_dst)
    return dst, theta0, components


def gen_random(kind: str, seed: int, blocks: int, cone_dim: int = MAX_CONE_DIM,
               phantom_dim: int | None = None) -> Document:
    """Deterministic valid document of the requested kind."""
    _check_bounds(blocks, cone_dim)
    rng = random.Random(f"{kind}|{seed}|{blocks}|{cone_dim}|{phantom_dim}")
    for _ in range(GENERATION_ATTEMPTS):
        try:
            return _generate(kind, rng, blocks, cone_dim, phantom_dim)
        except (CapacityError,):
            raise
        except Exception:
            continue
    raise GenerationError(f"generation cap exceeded for kind {kind}", seed=seed)


def _generate(kind, rng, blocks, cone_dim, phantom_dim) -> Document:
    if kind == "s-object":
        spec = _random_spec(rng, blocks, cone_dim)
        return document_of(SObject(_random_group(rng, blocks), _random_k1(rng), spec.family()))
    if kind == "e-object":
        spec = _random_spec(rng, blocks, cone_dim)
        t = phantom_dim if phantom_dim is not None else rng.randint(0, 2)
        return document_of(EObject(_random_group(rng, blocks), _random_k1(rng),
                                   TraceConeX(spec.family(), t)))
    if kind in ("s-morphism", "e-morphism"):
        bundle = gen_morphism(kind, rng, blocks, cone_dim)
        return document_of(bundle)
    raise CapacityError(f"unknown kind {kind!r}")


def gen_morphism(kind: str, rng: random.Random, blocks: int, cone_dim: int) -> MorphismBundle:
    src_spec = _random_spec(rng, blocks, cone_dim)
    dst_spec, theta0, components = _derive_target(rng, blocks, src_spec, cone_dim)
    k1 = _random_k1(rng)
    group = ScaledOrderedGroup(blocks, Scale.all())
    theta1 = K1Hom.identity(k1)
    if kind == "s-morphism":
        src = SObject(group, k1, src_spec.family())
        dst = SObject(group, k1, dst_spec.family())
        return MorphismBundle(SMorphism(theta0, theta1, components), src, dst)
    src = EObject(group, k1, TraceConeX(src_spec.family(), 0))
    dst = EObject(group, k1, TraceConeX(dst_spec.family(), 0))
    return MorphismBundle(EMorphism(theta0, theta1, components, Mat.identity(0)), src, dst)


def gen_composable_pair(kind: str, seed: int, blocks: int, cone_dim: int = MAX_CONE_DIM):
    """Two seeded morphism bundles that share their middle object."""
    _check_bounds(blocks, cone_dim)
    rng = random.Random(f"pair|{kind}|{seed}|{blocks}|{cone_dim}")
    a_spec = _random_spec(rng, blocks, cone_dim)
    b_spec, theta0_ab, comp_ab = _derive_target(rng, blocks, a_spec, cone_dim)
    c_spec, theta0_bc, comp_bc = _derive_target(rng, blocks, b_spec, cone_dim)
    k1 = _random_k1(rng)
    group = ScaledOrderedGroup(blocks, Scale.all())
    theta1 = K1Hom.identity(k1)
    if kind == "s-morphism":
        a = SObject(group, k1, a_spec.family())
        b = SObject(group, k1, b_spec.family())
        c = SObject(group, k1, c_spec.family())
        return (MorphismBundle(SMorphism(theta0_ab, theta1, comp_ab), a, b),
                MorphismBundle(SMorphism(theta0_bc, theta1, comp_bc), b, c))
    a = EObject(group, k1, TraceConeX(a_spec.family(), 0))
    b = EObject(group, k1, TraceConeX(b_spec.family(), 0))
    c = EObject(group, k1, TraceConeX(c_spec.family(), 0))
    return (MorphismBundle(EMorphism(theta0_ab, theta1, comp_ab, Mat.identity(0)), a, b),
            MorphismBundle(EMorphism(theta0_bc, theta1, comp_bc, Mat.identity(0)), b, c))


# ---------------------------------------------------------------------------
# The named corpus


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    document: Document
    expected: dict


def _tables_family(rank, dims, restrictions, pairings) -> DeltaFamily:
    d = {frozenset(s): k for s, k in dims.items()}
    r = {(frozenset(a), frozenset(b)): Mat.from_rows(rows, cols=d[frozenset(a)])
         for (a, b), rows in restrictions.items()}
    p = {frozenset(s): {} for s in d}
    for (s, i), row in pairings.items():
        p[frozenset(s)][i] = tuple(fr(x) for x in row)
    return DeltaFamily(rank, d, r, p)


def _coordinate_e_object(n: int, k1: FinAbGroup) -> EObject:
    return EObject(ScaledOrderedGroup(n, Scale.all()), k1, TraceConeX(coordinate_family(n), 0))


def _razak_object() -> EObject:
    return EObject(ScaledOrderedGroup(0, Scale.all()), FinAbGroup(0, ()),
                   TraceConeX(coordinate_family(0), 1))


def _af_two_ideal() -> SObject:
    return SObject(ScaledOrderedGroup(2, Scale.interval([1, 1])), FinAbGroup(0, (2,)),
                   coordinate_family(2))


def _mutant_condition_1() -> SObject:
    """n = 3; the restriction to {1} disagrees with both composites.

    The cone over {1} has a second ray weighted into the pairing, so the
    swap keeps pairings consistent while breaking composition only.
    """
    dims = {(): 0, (1,): 2, (2,): 1, (3,): 1, (1, 2): 2, (1, 3): 2, (2, 3): 2, (1, 2, 3): 3}
    restrictions = {
        ((1,), ()): [], ((2,), ()): [], ((3,), ()): [],
        ((1, 2), ()): [], ((1, 3), ()): [], ((2, 3), ()): [], ((1, 2, 3), ()): [],
        ((1, 2), (1,)): [[1, 0], [0, 0]],
        ((1, 2), (2,)): [[0, 1]],
        ((1, 3), (1,)): [[1, 0], [0, 0]],
        ((1, 3), (3,)): [[0, 1]],
        ((2, 3), (2,)): [[1, 0]],
        ((2, 3), (3,)): [[0, 1]],
        ((1, 2, 3), (1, 2)): [[1, 0, 0], [0, 1, 0]],
        ((1, 2, 3), (1, 3)): [[1, 0, 0], [0, 0, 1]],
        ((1, 2, 3), (2, 3)): [[0, 1, 0], [0, 0, 1]],
        ((1, 2, 3), (1,)): [[0, 0, 0], [1, 0, 0]],  # composites give [[1,0,0],[0,0,0]]
        ((1, 2, 3), (2,)): [[0, 1, 0]],
        ((1, 2, 3), (3,)): [[0, 0, 1]],
    }
    pairings = {
        ((1,), 1): [1, 1], ((2,), 2): [1], ((3,), 3): [1],
        ((1, 2), 1): [1, 0], ((1, 2), 2): [0, 1],
        ((1, 3), 1): [1, 0], ((1, 3), 3): [0, 1],
        ((2, 3), 2): [1, 0], ((2, 3), 3): [0, 1],
        ((1, 2, 3), 1): [1, 0, 0], ((1, 2, 3), 2): [0, 1, 0], ((1, 2, 3), 3): [0, 0, 1],
    }
    family = _tables_family(3, dims, restrictions, pairings)
    return SObject(ScaledOrderedGroup(3, Scale.all()), FinAbGroup(0, ()), family)


def _mutant_condition_2() -> SObject:
    """Coordinate n = 2 with one pairing doubled over the full support."""
    family = coordinate_family(2)
    pairings = {s: dict(rows) for s, rows in family.pairings.items()}
    full = frozenset([1, 2])
    pairings[full][2] = (fr(0), fr(2))
    mutated = DeltaFamily(2, dict(family.dims), dict(family.restrictions), pairings)
    return SObject(ScaledOrderedGroup(2, Scale.all()), FinAbGroup(0, ()), mutated)


def _mutant_condition_3() -> SObject:
    """n = 2; a mixing restriction leaves a dominated ray functional unliftable."""
    dims = {(): 0, (1,): 2, (2,): 1, (1, 2): 2}
    restrictions = {
        ((1,), ()): [], ((2,), ()): [], ((1, 2), ()): [],
        ((1, 2), (1,)): [[1, 0], [1, 1]],
        ((1, 2), (2,)): [[0, 1]],
    }
    pairings = {
        ((1,), 1): [1, 1], ((2,), 2): [1],
        ((1, 2), 1): [2, 1], ((1, 2), 2): [0, 1],
    }
    family = _tables_family(2, dims, restrictions, pairings)
    return SObject(ScaledOrderedGroup(2, Scale.all()), FinAbGroup(0, ()), family)


def _mutant_condition_4() -> SObject:
    """n = 2; the union cone has a ray invisible to both pieces."""
    dims = {(): 0, (1,): 1, (2,): 1, (1, 2): 3}
    restrictions = {
        ((1,), ()): [], ((2,), ()): [], ((1, 2), ()): [],
        ((1, 2), (1,)): [[1, 0, 0]],
        ((1, 2), (2,)): [[0, 1, 0]],
    }
    pairings = {
        ((1,), 1): [1], ((2,), 2): [1],
        ((1, 2), 1): [1, 0, 0], ((1, 2), 2): [0, 1, 0],
    }
    family = _tables_family(2, dims, restrictions, pairings)
    return SObject(ScaledOrderedGroup(2, Scale.all()), FinAbGroup(0, ()), family)


def _mutant_zeta() -> MorphismBundle:
    """Identity K-theory with the trace map doubled: pairing compatibility breaks."""
    obj = _coordinate_e_object(2, FinAbGroup(0, ()))
    zeta = {s: Mat.from_rows([[2 if i == j else 0 for j in range(obj.cone.family.dim(s))]
                              for i in range(obj.cone.family.dim(s))],
                             cols=obj.cone.family.dim(s))
            for s in obj.cone.family.supports()}
    m = EMorphism(PositiveHom.identity(2), K1Hom.identity(obj.k1), zeta, Mat.identity(0))
    return MorphismBundle(m, obj, obj)


def _mutant_scale() -> MorphismBundle:
    """Doubling one block escapes the unit scale; trace maps stay compatible."""
    obj = _af_two_ideal()
    theta0 = PositiveHom.from_rows([[2, 0], [0, 1]], source_rank=2)
    ratios = {1: fr(2), 2: fr(1)}
    xi = {}
    for s in obj.family.supports():
        order = sorted(s)
        xi[s] = Mat.from_rows([[ratios[order[i]] if i == j else 0 for j in range(len(order))]
                               for i in range(len(order))], cols=len(order))
    m = SMorphism(theta0, K1Hom.identity(obj.k1), xi)
    return MorphismBundle(m, obj, obj)


def corpus() -> list:
    k1s = {0: FinAbGroup(0, ()), 1: FinAbGroup(0, ()), 2: FinAbGroup(1, ()),
           3: FinAbGroup(0, (2, 4))}
    entries = []
    for n in range(4):
        entries.append(CorpusEntry(
            f"coord-{n}", document_of(_coordinate_e_object(n, k1s[n])),
            {"validate": "ok", "roundtrip": "identity", "ideal-property": "true"}))
    entries.append(CorpusEntry(
        "af-2", document_of(_af_two_ideal()),
        {"validate": "ok", "roundtrip": "identity"}))
    entries.append(CorpusEntry(
        "razak", document_of(_razak_object()),
        {"validate": "ok", "roundtrip": "mismatch:phantom", "ideal-property": "false",
         "stevens-trivial": "true"}))
    entries.append(CorpusEntry(
        "mutant-cond1", document_of(_mutant_condition_1()),
        {"validate": "violation:condition-1"}))
    entries.append(CorpusEntry(
        "mutant-cond2", document_of(_mutant_condition_2()),
        {"validate": "violation:condition-2"}))
    entries.append(CorpusEntry(
        "mutant-cond3", document_of(_mutant_condition_3()),
        {"validate": "violation:condition-3"}))
    entries.append(CorpusEntry(
        "mutant-cond4", document_of(_mutant_condition_4()),
        {"validate": "violation:condition-4+simplex-base"}))
    entries.append(CorpusEntry(
        "mutant-zeta", document_of(_mutant_zeta()),
        {"validate": "violation:compatibility"}))
    entries.append(CorpusEntry(
        "mutant-scale", document_of(_mutant_scale()),
        {"validate": "violation:scale"}))
    return entries


# ---------------------------------------------------------------------------
# Checks


def _verdict_of_report(report) -> str:
    return "ok" if report.ok else "violation:" + "+".join(report.codes())


def check_validate(doc: Document) -> str:
    value = doc.value
    if doc.kind == "s-object":
        return _verdict_of_report(validate_s_object(value))
    if doc.kind == "e-object":
        return _verdict_of_report(validate_e_object(value))
    if doc.kind == "s-morphism":
        return _verdict_of_report(validate_s_morphism(value.morphism, value.src, value.dst))
    return _verdict_of_report(validate_e_morphism(value.morphism, value.src, value.dst))


def check_roundtrip(doc: Document) -> str:
    report = roundtrip_object(doc.value)
    if report.verdict == "identity":
        return "identity"
    return f"mismatch:{report.witness[0]}"


def check_ideal_property(doc: Document) -> str:
    return "true" if has_ideal_property(doc.value) else "false"


def check_stevens_trivial(doc: Document) -> str:
    s = elliott_to_stevens(doc.value)
    trivial = all(d == 0 for d in s.family.dims.values())
    return "true" if trivial else "false"


CHECKS = {
    "validate": check_validate,
    "roundtrip": check_roundtrip,
    "ideal-property": check_ideal_property,
    "stevens-trivial": check_stevens_trivial,
}

FILE_EXTENSIONS = {"s-object": ".sj", "e-object": ".ej",
                   "s-morphism": ".smj", "e-morphism": ".emj"}


def run_entry(entry: CorpusEntry) -> dict:
    """Actual verdicts for every check the entry declares expectations for."""
    return {name: CHECKS[name](entry.document) for name in sorted(entry.expected)}
