from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN
from fibercover.covers import Permutation, SuperellipticSpec, make_cover
from fibercover.errors import InvalidSpecError
from fibercover.fileformat import ParsedSpec, dumps, parse_document, parse_text, read_spec, schema, to_document

PATH_LIFT = {
    "version": 1, "kind": "path-lift",
    "curve": {"exponent": 2, "zeros": [[0, 0]]},
    "path": [[1, 0], [0, 1], [-1, 0]], "start_value": [1, 0],
}


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.json")), ids=lambda p: p.stem)
def test_golden_specs_round_trip(path):
    parsed = read_spec(str(path))
    text = dumps(to_document(parsed))
    again = parse_text(text)
    assert again == parsed
    assert dumps(to_document(again)) == text


def test_path_lift_round_trip():
    parsed = parse_document(PATH_LIFT)
    assert parse_text(dumps(to_document(parsed))) == parsed


@pytest.mark.parametrize("text,field,message", [
    ('{"version": 1, "kind": "cover", "degree": 2', "json", "line 1"),
    ('{"version": 1, "kind": "cover", "degree": 2, "branch_points": [], "monodromy": [], "x": 1}', "$", "x"),
    ('{"version": 1, "kind": "cover", "degree": "2", "branch_points": [], "monodromy": []}', "$.degree", "integer"),
    ('{"version": 2, "kind": "cover", "degree": 2, "branch_points": [], "monodromy": []}', "$.version", "1"),
    ('{"version": 1, "kind": "cover", "degree": 2, "branch_points": [[NaN, 0]], "monodromy": [[1, 0]]}',
     "json", "NaN"),
    ('{"version": 1, "kind": "nope"}', "$.kind", "nope"),
])
def test_schema_and_json_errors(text, field, message):
    with pytest.raises(InvalidSpecError, match=message) as info:
        parse_text(text)
    assert info.value.field == field


def test_semantic_error_names_nested_field():
    doc = {"version": 1, "kind": "fiber-product",
           "first": {"kind": "cover", "degree": 2, "branch_points": [[0, 0]], "monodromy": [[0, 1]]},
           "second": {"kind": "superelliptic", "exponent": 2, "zeros": [[0, 0]]}}
    with pytest.raises(InvalidSpecError, match="identity") as info:
        parse_document(doc)
    assert info.value.field.startswith("first.")


def test_dumps_is_sorted_and_newline_terminated():
    text = dumps({"b": 1, "a": [1, 2]})
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b"]


@st.composite
def cover_specs(draw):
    n = draw(st.integers(2, 5))
    pts = draw(st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), max_size=5, unique=True))
    perms = [Permutation(tuple(draw(st.permutations(list(range(n)))))) for _ in pts]
    keep = [(complex(*p), m) for p, m in zip(pts, perms) if not m.is_identity()]
    return ParsedSpec("cover", make_cover(n, [p for p, _ in keep], [m for _, m in keep]))


@settings(max_examples=100, deadline=None)
@given(cover_specs())
def test_cover_documents_round_trip(parsed):
    assert parse_text(dumps(to_document(parsed))) == parsed


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 6), st.lists(st.tuples(st.integers(-9, 9), st.integers(-9, 9)), min_size=1, max_size=6,
                                   unique=True))
def test_superelliptic_documents_round_trip(q, zeros):
    spec = SuperellipticSpec(q, tuple(complex(*z) for z in zeros))
    parsed = parse_document(to_document(ParsedSpec("superelliptic", spec)))
    assert parse_text(dumps(to_document(parsed))) == parsed


def test_docs_schema_matches_packaged_schema():
    docs = GOLDEN.parent.parent / "docs" / "spec.schema.json"
    assert json.loads(docs.read_text(encoding="utf-8")) == schema()
