import json

import pytest
from hypothesis import given, settings, strategies as st

from cayley import io
from cayley.edcs import Edcs
from cayley.graph import Graph, pair


def _doc_text(**over):
    raw = {
        "format_version": "1",
        "vertices": [1, 2, 3, 4],
        "edges": [
            {"u": 1, "v": 2, "delta": 1.0},
            {"u": 2, "v": 3, "delta": 1.0},
            {"u": 3, "v": 4, "interval": [0.5, 2.0]},
        ],
        "nonedges": [[1, 3]],
        "dim": 2,
    }
    raw.update(over)
    return json.dumps(raw, indent=2)


def test_load_basic():
    doc = io.loads(_doc_text())
    e = doc.to_edcs()
    assert e.graph.n == 4 and e.graph.m == 3
    assert e.weights[(3, 4)] == (0.5, 2.0)
    assert doc.nonedges == ((1, 3),)


@st.composite
def documents(draw):
    n = draw(st.integers(2, 7))
    names = draw(st.one_of(
        st.just(list(range(n))),
        st.lists(st.text("abcxyz", min_size=1, max_size=3), min_size=n, max_size=n, unique=True),
    ))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, unique=True))
    dist = st.floats(0, 100, allow_nan=False)
    records = []
    for i, j in chosen:
        if draw(st.booleans()):
            records.append(io.EdgeRecord(names[i], names[j], draw(dist)))
        else:
            a, b = sorted((draw(dist), draw(dist)))
            records.append(io.EdgeRecord(names[i], names[j], None, (a, b)))
    rest = [p for p in pairs if p not in chosen]
    non = draw(st.lists(st.sampled_from(rest), unique=True)) if rest else []
    nonedges = tuple(pair(names[i], names[j]) for i, j in non)
    return io.EdcsDocument(tuple(names), tuple(records), nonedges, draw(st.sampled_from([2, 3])))


@settings(max_examples=80, deadline=None)
@given(documents())
def test_round_trip(doc):
    again = io.loads(doc.dumps())
    assert again == doc
    assert io.loads(again.dumps()).dumps() == doc.dumps()


def test_save_load_file(tmp_path):
    doc = io.loads(_doc_text(note="kept"))
    path = tmp_path / "d.json"
    io.save(doc, path)
    back = io.load(path)
    assert back == doc
    assert back.extra == {"note": "kept"}


def test_from_edcs_round_trip():
    g = Graph([1, 2, 3], [(1, 2), (2, 3)])
    e = Edcs(g, {(1, 2): 1.0, (2, 3): (1.0, 2.0)}, frozenset({(1, 3)}), 2)
    doc = io.from_edcs(e)
    back = io.loads(doc.dumps()).to_edcs()
    assert back.weights == e.weights
    assert back.sorted_params() == [(1, 3)]


@pytest.mark.parametrize("mutate,field,line", [
    (lambda r: r.update(format_version="2"), "format_version", 2),
    (lambda r: r["edges"][1].update(v=9), "edges[1].v", None),
    (lambda r: r["edges"][2].update(interval=[3.0, 1.0]), "edges[2].interval", None),
    (lambda r: r["edges"][0].update(delta=-1.0), "edges[0].delta", None),
    (lambda r: r["edges"][0].pop("delta"), "edges[0]", None),
    (lambda r: r.update(dim=4), "dim", None),
    (lambda r: r.update(vertices=[1, 2, 2, 4]), "vertices", None),
    (lambda r: r.update(nonedges=[[1, 2]]), "nonedges[0]", None),
])
def test_diagnostics(mutate, field, line):
    raw = json.loads(_doc_text())
    mutate(raw)
    text = json.dumps(raw, indent=2)
    with pytest.raises(io.DocumentError) as info:
        io.loads(text)
    assert info.value.field == field
    assert info.value.line is not None
    if line is not None:
        assert info.value.line == line


def test_edge_line_points_at_record():
    raw = json.loads(_doc_text())
    raw["edges"][2]["v"] = 99
    text = json.dumps(raw, indent=2)
    err = pytest.raises(io.DocumentError, io.loads, text).value
    assert '"u": 3' in text.splitlines()[err.line - 1]


def test_syntax_error_line():
    err = pytest.raises(io.DocumentError, io.loads, '{\n  "format_version": "1",\n  oops\n}').value
    assert err.line == 3


def test_duplicate_edge():
    raw = json.loads(_doc_text())
    raw["edges"].append({"u": 2, "v": 1, "delta": 1.0})
    err = pytest.raises(io.DocumentError, io.loads, json.dumps(raw)).value
    assert err.field == "edges[3]"
