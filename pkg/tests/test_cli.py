import json
import math

import pytest

from cayley.cli import main


def _write(tmp_path, name, vertices, edges, nonedges=(), dim=2):
    doc = {
        "format_version": "1",
        "vertices": vertices,
        "edges": [{"u": u, "v": v, "delta": d} for u, v, d in edges],
        "nonedges": [list(p) for p in nonedges],
        "dim": dim,
    }
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2))
    return str(path)


@pytest.fixture
def k4f(tmp_path):
    edges = [(1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0), (2, 4, 1.0), (3, 4, 1.0)]
    return _write(tmp_path, "k4f.json", [1, 2, 3, 4], edges, [(1, 4)])


@pytest.fixture
def c4(tmp_path):
    edges = [(1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (1, 4, 1.0)]
    return _write(tmp_path, "c4.json", [1, 2, 3, 4], edges, [(1, 3)])


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def test_analyze_true_and_false(capsys, c4, k4f):
    code, out, _ = run(capsys, "analyze", c4, "--nonedge", "1,3")
    assert code == 0 and out["single_interval"]["verdict"] is True
    code, out, _ = run(capsys, "analyze", k4f, "--nonedge", "1,4")
    assert code == 3 and out["single_interval"]["verdict"] is False
    assert out["single_interval"]["offenders"]


def test_analyze_default_query(capsys, c4):
    code, out, _ = run(capsys, "analyze", c4)
    assert code == 0 and out["verdict"] is True


def test_decompose_and_complete(capsys, c4):
    code, out, _ = run(capsys, "decompose", c4)
    assert code == 0 and out["components"]
    code, out, _ = run(capsys, "complete", c4)
    assert code == 0 and out["generically_complete"] is True


def test_polytope(capsys, c4):
    code, out, _ = run(capsys, "polytope", c4)
    assert code == 0
    lo, hi = out["intervals"]["1,3"] if "1,3" in out["intervals"] else next(iter(out["intervals"].values()))
    assert lo == pytest.approx(0.0, abs=1e-9) and hi == pytest.approx(2.0, abs=1e-9)


def test_sample_is_seeded(capsys, c4, tmp_path, monkeypatch):
    _, a, _ = run(capsys, "sample", c4, "--count", "3", "--seed", "7")
    _, b, _ = run(capsys, "sample", c4, "--count", "3", "--seed", "7")
    assert a == b and a["seed"] == 7 and len(a["samples"]) == 3
    monkeypatch.setenv("CAYLEY_SEED", "11")
    _, c, _ = run(capsys, "sample", c4, "--count", "2")
    assert c["seed"] == 11


def test_sample_svg(capsys, c4, tmp_path):
    svg = tmp_path / "s.svg"
    code, out, _ = run(capsys, "sample", c4, "--count", "2", "--seed", "1", "--svg", str(svg))
    assert code == 0
    text = svg.read_text()
    assert text.startswith("<svg") or text.startswith("<?xml")
    assert text.count("<g") == 2


def test_realize_with_config(capsys, c4):
    code, out, _ = run(capsys, "realize", c4, "--config", '{"1,3": 1.2}')
    assert code == 0 and out["max_error"] < 1e-9
    p1, p3 = out["points"]["1"], out["points"]["3"]
    assert math.dist(p1, p3) == pytest.approx(1.2, abs=1e-9)


def test_realize_infeasible_config(capsys, c4):
    code, _, err = run(capsys, "realize", c4, "--config", '{"1,3": 2.5}')
    assert code == 4 and "infeasible" in err


def test_witness_and_oracle(capsys, k4f, tmp_path):
    target = tmp_path / "w.json"
    code, out, _ = run(capsys, "witness", k4f, "--nonedge", "1,4", "-o", str(target))
    assert code == 0 and target.exists()
    expected = out["expected_values"]
    code, out, _ = run(capsys, "oracle", str(target), "--grid", "200")
    assert code == 0
    got = out["intervals"]
    assert len(got) == len(expected) >= 2
    for (lo, hi), v in zip(got, sorted(expected)):
        assert lo == pytest.approx(v, abs=1e-6) and hi == pytest.approx(v, abs=1e-6)


def test_oracle_k4f(capsys, k4f):
    code, out, _ = run(capsys, "oracle", k4f)
    assert code == 0
    vals = [lo for lo, _ in out["intervals"]]
    assert vals == pytest.approx([0.0, math.sqrt(3)], abs=1e-6)


@pytest.mark.parametrize("argv", [
    ["analyze", "/nonexistent.json"],
    ["oracle", "{doc}", "--nonedge", "1,9"],
    ["realize", "{doc}", "--config", "not json"],
    ["sample", "{doc}", "--count", "-1"],
    ["bogus"],
])
def test_input_errors(capsys, c4, argv):
    code, _, err = run(capsys, *[a.format(doc=c4) for a in argv])
    assert code == 2


def test_bad_document(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "format_version": "1",\n  "vertices": [1, 2],\n  "edges": [{"u": 1, "v": 3, "delta": 1}]\n}')
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "line 4" in err and "edges[0].v" in err
