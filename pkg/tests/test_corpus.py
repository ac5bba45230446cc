import pytest

from kcones.corpus import CHECKS, corpus, gen_random, run_entry
from kcones.elliott import validate_e_morphism, validate_e_object
from kcones.errors import CapacityError
from kcones.stevens import validate_s_morphism, validate_s_object


def test_every_expected_check_exists():
    for entry in corpus():
        for name in entry.expected:
            assert name in CHECKS, (entry.name, name)


def test_corpus_expectations_match_actuals():
    for entry in corpus():
        actual = run_entry(entry)
        assert actual == entry.expected, (entry.name, actual)


def test_corpus_names_are_unique_and_cover_the_required_entries():
    names = [e.name for e in corpus()]
    assert len(names) == len(set(names))
    for required in ("coord-0", "coord-1", "coord-2", "coord-3", "af-2", "razak",
                     "mutant-cond1", "mutant-cond2", "mutant-cond3", "mutant-cond4",
                     "mutant-zeta", "mutant-scale"):
        assert required in names


def test_generation_bounds():
    with pytest.raises(CapacityError):
        gen_random("s-object", 1, 7)
    with pytest.raises(CapacityError):
        gen_random("s-object", 1, 2, cone_dim=5)
    with pytest.raises(CapacityError):
        gen_random("widget", 1, 2)


def test_generated_documents_validate_many_seeds():
    # 500 seeds per kind; block counts cycle small to keep exact arithmetic quick.
    blocks_cycle = (0, 1, 2, 2, 3)
    for seed in range(500):
        blocks = blocks_cycle[seed % 5]
        cone_dim = 1 + (seed % 2 if blocks > 1 else 0)
        doc = gen_random("s-object", seed, blocks, cone_dim)
        assert validate_s_object(doc.value).ok, ("s-object", seed)
    for seed in range(500):
        blocks = blocks_cycle[seed % 5]
        cone_dim = 1 + (seed % 2 if blocks > 1 else 0)
        doc = gen_random("e-object", seed, blocks, cone_dim)
        assert validate_e_object(doc.value, sample_pairs=24).ok, ("e-object", seed)
    for seed in range(500):
        blocks = blocks_cycle[seed % 5]
        cone_dim = 1 + (seed % 2 if blocks > 1 else 0)
        bundle = gen_random("s-morphism", seed, blocks, cone_dim).value
        assert validate_s_morphism(bundle.morphism, bundle.src, bundle.dst).ok, seed
    for seed in range(500):
        blocks = blocks_cycle[seed % 5]
        cone_dim = 1 + (seed % 2 if blocks > 1 else 0)
        bundle = gen_random("e-morphism", seed, blocks, cone_dim).value
        assert validate_e_morphism(bundle.morphism, bundle.src, bundle.dst,
                                   samples=24).ok, seed


def test_full_depth_validation_on_a_few_generated_objects():
    for seed in (0, 1, 2):
        doc = gen_random("e-object", seed, 3, 2, phantom_dim=1)
        assert validate_e_object(doc.value).ok, seed
