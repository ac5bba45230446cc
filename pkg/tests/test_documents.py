import os

import pytest

from kcones.corpus import corpus, gen_random
from kcones.documents import emit, parse, rational_from_str, rational_to_str
from kcones.errors import DocumentError, ParseError

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def test_rational_strings():
    from fractions import Fraction
    assert rational_to_str(Fraction(3)) == "3"
    assert rational_to_str(Fraction(1, 2)) == "1/2"
    assert rational_from_str("2/4", "x") == Fraction(1, 2)
    with pytest.raises(DocumentError):
        rational_from_str("3/0", "x")
    with pytest.raises(DocumentError):
        rational_from_str("a/b", "x")


def test_corpus_documents_roundtrip_byte_identical():
    for entry in corpus():
        text = emit(entry.document)
        doc = parse(text)
        assert doc.kind == entry.document.kind
        assert doc.value == entry.document.value, entry.name
        assert emit(doc) == text, entry.name


def test_generated_documents_roundtrip():
    for kind in ("s-object", "e-object", "s-morphism", "e-morphism"):
        text = emit(gen_random(kind, 5, 2, 2))
        assert emit(parse(text)) == text


def test_parse_errors():
    with pytest.raises(ParseError) as err:
        parse("{not json")
    assert err.value.line == 1
    with pytest.raises(ParseError):
        parse('{"kind": "mystery", "version": "1", "payload": {}}')
    with pytest.raises(DocumentError):
        parse('{"kind": "s-object", "version": "2", "payload": {}}')


def test_semantic_errors_name_the_field():
    entry = [e for e in corpus() if e.name == "coord-2"][0]
    text = emit(entry.document)
    bad = text.replace('"phantom_dim": 0', '"phantom_dim": -1')
    with pytest.raises(DocumentError) as err:
        parse(bad)
    assert "phantom_dim" in (err.value.field or "")

    bad = text.replace('"1"', '"1/0"', 1)
    with pytest.raises(DocumentError):
        parse(bad)


def test_negative_restriction_entry_rejected():
    entry = [e for e in corpus() if e.name == "coord-2"][0]
    text = emit(entry.document)
    assert '"0"' in text
    bad = text.replace('"0"', '"-1"', 1)
    with pytest.raises(DocumentError):
        parse(bad)


def test_golden_generator_snapshot():
    path = os.path.join(GOLDEN, "s-object-seed42-blocks3.json")
    with open(path, "r", encoding="utf-8") as fh:
        frozen = fh.read()
    assert emit(gen_random("s-object", 42, 3)) == frozen


def test_generator_determinism():
    for kind in ("s-object", "e-object", "s-morphism", "e-morphism"):
        assert emit(gen_random(kind, 123, 3, 2)) == emit(gen_random(kind, 123, 3, 2))
    assert emit(gen_random("s-object", 1, 2)) != emit(gen_random("s-object", 2, 2))


def test_zero_rank_documents():
    doc = gen_random("s-object", 9, 0, 1)
    assert doc.value.group.rank == 0
    assert emit(parse(emit(doc))) == emit(doc)
