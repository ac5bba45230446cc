import random
from fractions import Fraction

import pytest

from kcones.corpus import corpus, gen_composable_pair, gen_random
from kcones.errors import DimensionError, DomainError
from kcones.groups import FinAbGroup, Scale, ScaledOrderedGroup
from kcones.linalg import Mat
from kcones.stevens import (DeltaFamily, SMorphism, SObject, class_family,
                            compose_s_morphisms, coordinate_family, decompose_over_union,
                            hereditary_lift, identity_s_morphism, restrict,
                            validate_s_morphism, validate_s_object)


def _coord_object(n, **kw):
    return SObject(ScaledOrderedGroup(n, Scale.all()), FinAbGroup(0, ()),
                   coordinate_family(n, **kw))


def test_coordinate_families_validate():
    for n in range(4):
        assert validate_s_object(_coord_object(n)).ok


def test_weighted_and_fused_families_validate():
    assert validate_s_object(_coord_object(3, weights=[1, Fraction(1, 2), 3])).ok
    fused = SObject(ScaledOrderedGroup(3, Scale.all()), FinAbGroup(0, ()),
                    class_family(3, classes=[1, 1, 2]))
    assert validate_s_object(fused).ok


def test_restrict_examples():
    fam = coordinate_family(2)
    full = frozenset({1, 2})
    assert restrict((1, 2), full, full, fam) == (1, 2)
    assert restrict((1, 2), full, frozenset({2}), fam) == (2,)
    assert restrict((1, 2), full, frozenset(), fam) == ()
    with pytest.raises(DimensionError):
        restrict((1,), frozenset({1}), frozenset({1, 2}), fam)


def test_base_zero_mutant_flags_only_simplex_base():
    dims = {frozenset(): 0, frozenset({1}): 2}
    restrictions = {(frozenset({1}), frozenset()): Mat.from_rows([], cols=2)}
    pairings = {frozenset(): {}, frozenset({1}): {1: (Fraction(1), Fraction(0))}}
    family = DeltaFamily(1, dims, restrictions, pairings)
    obj = SObject(ScaledOrderedGroup(1, Scale.all()), FinAbGroup(0, ()), family)
    assert validate_s_object(obj).codes() == ("simplex-base",)


def test_mutants_fail_their_conditions_only():
    by_name = {e.name: e for e in corpus()}
    expectations = {
        "mutant-cond1": ("condition-1",),
        "mutant-cond2": ("condition-2",),
        "mutant-cond3": ("condition-3",),
        "mutant-cond4": ("condition-4", "simplex-base"),
    }
    for name, codes in expectations.items():
        report = validate_s_object(by_name[name].document.value)
        assert report.codes() == codes, (name, report.codes())


def test_hereditary_lift_examples_and_errors():
    fam = coordinate_family(2)
    sub, sup = frozenset({1}), frozenset({1, 2})
    assert hereditary_lift((4, 7), (2,), sub, sup, fam) == (2, 7)
    assert hereditary_lift((4, 7), (4,), sub, sup, fam) == (4, 7)
    with pytest.raises(DomainError):
        hereditary_lift((4, 7), (5,), sub, sup, fam)


def test_hereditary_lift_random_projections():
    rng = random.Random(11)
    for _ in range(1000):
        n = rng.randrange(1, 5)
        fam = coordinate_family(n)
        sup = frozenset(i + 1 for i in range(n) if rng.random() < 0.7) or frozenset({1})
        sub = frozenset(i for i in sup if rng.random() < 0.6)
        f = tuple(Fraction(rng.randrange(0, 9), rng.randrange(1, 3)) for _ in range(len(sup)))
        order = sorted(sup)
        g = tuple(f[order.index(i)] * Fraction(rng.randrange(0, 4), 3) for i in sorted(sub))
        h = hereditary_lift(f, g, sub, sup, fam)
        assert all(a <= b for a, b in zip(h, f))
        assert restrict(h, sup, sub, fam) == g


def test_decompose_over_union_examples():
    fam = coordinate_family(3)
    f1, f2 = decompose_over_union((1, 2, 3), (1, 1, 0), (0, 1, 1), fam)
    assert f1 == (1, 2) and f2 == (0, 3)
    lam1 = fam.restriction(frozenset({1, 2, 3}), frozenset({1, 2}))
    lam2 = fam.restriction(frozenset({1, 2, 3}), frozenset({2, 3}))
    rebuilt = tuple(a + b for a, b in zip(lam1.left_apply(f1), lam2.left_apply(f2)))
    assert rebuilt == (1, 2, 3)
    # pullback identity on random cone points
    rng = random.Random(0)
    for _ in range(10):
        v = tuple(Fraction(rng.randrange(0, 9)) for _ in range(3))
        lhs = sum(a * b for a, b in zip((1, 2, 3), v))
        rhs = sum(a * b for a, b in zip(f1, lam1.apply(v))) + \
            sum(a * b for a, b in zip(f2, lam2.apply(v)))
        assert lhs == rhs

    fam2 = coordinate_family(2)
    f1, f2 = decompose_over_union((1, 2), (1, 1), (0, 0), fam2)
    assert f1 == (1, 2) and f2 == ()
    f1, f2 = decompose_over_union((5, 7), (1, 0), (0, 2), fam2)
    assert f1 == (5,) and f2 == (7,)


def test_validate_s_morphism_identity_and_permutation():
    obj = _coord_object(3)
    ident = identity_s_morphism(obj)
    assert validate_s_morphism(ident, obj, obj).ok
    for seed in range(6):
        bundle = gen_random("s-morphism", seed, blocks=3, cone_dim=2).value
        assert validate_s_morphism(bundle.morphism, bundle.src, bundle.dst).ok


def test_perturbed_xi_breaks_a_square():
    bundle = gen_random("s-morphism", 5, blocks=2, cone_dim=2).value
    m = bundle.morphism
    target = frozenset({1})
    mat = m.xi[target]
    bumped = Mat.from_rows([[x + 1 for x in mat.row(0)]] + [list(mat.row(i)) for i in range(1, mat.rows)],
                           cols=mat.cols)
    xi = dict(m.xi)
    xi[target] = bumped
    report = validate_s_morphism(SMorphism(m.theta0, m.theta1, xi), bundle.src, bundle.dst)
    assert not report.ok
    assert "square" in report.codes() or "compatibility" in report.codes()


def test_missing_component_is_reported():
    obj = _coord_object(2)
    ident = identity_s_morphism(obj)
    xi = dict(ident.xi)
    del xi[frozenset({1})]
    report = validate_s_morphism(SMorphism(ident.theta0, ident.theta1, xi), obj, obj)
    assert "completeness" in report.codes()


def test_composition_preserves_validity():
    for seed in range(100):
        b1, b2 = gen_composable_pair("s-morphism", seed, blocks=2 + seed % 2, cone_dim=2)
        composed = compose_s_morphisms(b2.morphism, b1.morphism)
        assert validate_s_morphism(composed, b1.src, b2.dst).ok, seed


def test_compose_with_identity():
    obj = _coord_object(2)
    ident = identity_s_morphism(obj)
    assert compose_s_morphisms(ident, ident) == ident
    bundle = gen_random("s-morphism", 1, blocks=2, cone_dim=2).value
    left = compose_s_morphisms(bundle.morphism, identity_s_morphism(bundle.src))
    assert left == bundle.morphism


def test_incompatible_ranks_error():
    b2 = gen_random("s-morphism", 2, blocks=2, cone_dim=2).value
    b3 = gen_random("s-morphism", 3, blocks=3, cone_dim=2).value
    with pytest.raises(DimensionError):
        compose_s_morphisms(b3.morphism, b2.morphism)


def test_hereditary_lift_on_twisted_families():
    rng = random.Random(77)
    for seed in range(30):
        fam = gen_random("s-object", seed, blocks=3, cone_dim=3).value.family
        supports = fam.supports()
        sup = supports[rng.randrange(len(supports))]
        subs = [s for s in supports if s <= sup]
        sub = subs[rng.randrange(len(subs))]
        lam = fam.restriction(sup, sub)
        g = tuple(Fraction(rng.randrange(0, 6), rng.randrange(1, 3))
                  for _ in range(fam.dim(sub)))
        bump = tuple(Fraction(rng.randrange(0, 3)) for _ in range(fam.dim(sup)))
        f = tuple(a + b for a, b in zip(lam.left_apply(g), bump))
        h = hereditary_lift(f, g, sub, sup, fam)
        assert all(a <= b for a, b in zip(h, f))


def test_decompose_over_union_on_twisted_families():
    rng = random.Random(123)
    for seed in range(20):
        fam = gen_random("s-object", seed, blocks=3, cone_dim=3).value.family
        supports = fam.supports()
        for s1 in supports:
            for s2 in supports:
                if s1 <= s2 or s2 <= s1:
                    continue
                union = s1 | s2
                p = tuple(1 if i in s1 else 0 for i in range(1, 4))
                q = tuple(1 if i in s2 else 0 for i in range(1, 4))
                f = tuple(Fraction(rng.randrange(0, 5)) for _ in range(fam.dim(union)))
                f1, f2 = decompose_over_union(f, p, q, fam)
                lam1 = fam.restriction(union, s1)
                lam2 = fam.restriction(union, s2)
                rebuilt = tuple(a + b for a, b in zip(lam1.left_apply(f1),
                                                      lam2.left_apply(f2)))
                assert rebuilt == f


def test_pairing_condition_exact_on_generators():
    # Condition (2) holds as an identity on every ray generator for valid objects.
    for seed in range(5):
        fam = gen_random("s-object", seed, blocks=3, cone_dim=2).value.family
        for s_big in fam.supports():
            for s_small in fam.supports():
                if s_small < s_big:
                    lam = fam.restriction(s_big, s_small)
                    for i in sorted(s_small):
                        assert lam.left_apply(fam.pairing(s_small, i)) == fam.pairing(s_big, i)
