"""Versioned JSON documents for distance constraint systems."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .edcs import Edcs
from .errors import InputError
from .graph import Graph, pair, sorted_pairs

FORMAT_VERSION = "1"


class DocumentError(InputError):
    """Malformed document; ``line`` and ``field`` locate the problem when known."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.line = line
        self.field = field


@dataclass(frozen=True)
class EdgeRecord:
    u: object
    v: object
    delta: float | None = None
    interval: tuple | None = None

    def weight(self):
        return self.delta if self.interval is None else self.interval

    def to_json(self) -> dict:
        out = {"u": self.u, "v": self.v}
        if self.interval is None:
            out["delta"] = self.delta
        else:
            out["interval"] = list(self.interval)
        return out


@dataclass(frozen=True)
class EdcsDocument:
    vertices: tuple
    edges: tuple
    nonedges: tuple = ()
    dim: int = 2
    format_version: str = FORMAT_VERSION
    extra: dict = field(default_factory=dict, compare=False)

    def to_edcs(self) -> Edcs:
        weights = {pair(r.u, r.v): r.weight() for r in self.edges}
        g = Graph(self.vertices, weights.keys())
        return Edcs(g, weights, frozenset(pair(*p) for p in self.nonedges), self.dim)

    def to_json(self) -> dict:
        out = {
            "format_version": self.format_version,
            "vertices": list(self.vertices),
            "edges": [r.to_json() for r in self.edges],
            "dim": self.dim,
        }
        if self.nonedges:
            out["nonedges"] = [list(p) for p in self.nonedges]
        out.update(self.extra)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def _line_of(text: str, needle: str, nth: int = 0) -> int | None:
    """Line of the ``nth`` occurrence of ``needle`` in ``text`` (best effort)."""
    pos = -1
    for _ in range(nth + 1):
        pos = text.find(needle, pos + 1)
        if pos < 0:
            return None
    return text.count("\n", 0, pos) + 1


def _is_name(x) -> bool:
    return (isinstance(x, int) and not isinstance(x, bool)) or isinstance(x, str)


def _number(x, where: str, line) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise DocumentError(f"expected a number, got {x!r}", line, where)
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise DocumentError(f"distance must be finite and nonnegative, got {x!r}", line, where)
    return x


def loads(text: str) -> EdcsDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, None) from exc
    if not isinstance(raw, dict):
        raise DocumentError("top level must be an object", 1, None)
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION!r})",
                            _line_of(text, '"format_version"'), "format_version")
    verts = raw.get("vertices")
    if not isinstance(verts, list) or not all(_is_name(v) for v in verts):
        raise DocumentError("vertices must be a list of integer or string names",
                            _line_of(text, '"vertices"'), "vertices")
    if len(set(verts)) != len(verts):
        dup = next(v for v in verts if verts.count(v) > 1)
        raise DocumentError(f"duplicate vertex name {dup!r}", _line_of(text, '"vertices"'), "vertices")
    names = set(verts)
    dim = raw.get("dim", 2)
    if dim not in (2, 3) or isinstance(dim, bool):
        raise DocumentError(f"dim must be 2 or 3, got {dim!r}", _line_of(text, '"dim"'), "dim")
    edges_raw = raw.get("edges")
    if not isinstance(edges_raw, list):
        raise DocumentError("edges must be a list", _line_of(text, '"edges"'), "edges")
    records, seen = [], set()
    for i, rec in enumerate(edges_raw):
        where = f"edges[{i}]"
        line = _line_of(text, '"u"', i)
        if not isinstance(rec, dict):
            raise DocumentError("edge must be an object", line, where)
        for key in ("u", "v"):
            if key not in rec:
                raise DocumentError(f"missing {key!r}", line, where)
            if rec[key] not in names or not _is_name(rec[key]):
                raise DocumentError(f"undeclared vertex {rec[key]!r}", line, f"{where}.{key}")
        u, v = rec["u"], rec["v"]
        if u == v:
            raise DocumentError("self-loop", line, where)
        p = pair(u, v)
        if p in seen:
            raise DocumentError(f"duplicate edge {p!r}", line, where)
        seen.add(p)
        has_d, has_i = "delta" in rec, "interval" in rec
        if has_d == has_i:
            raise DocumentError("exactly one of 'delta' and 'interval' is required", line, where)
        if has_d:
            records.append(EdgeRecord(u, v, _number(rec["delta"], f"{where}.delta", line)))
        else:
            iv = rec["interval"]
            if not isinstance(iv, list) or len(iv) != 2:
                raise DocumentError("interval must be [l, r]", line, f"{where}.interval")
            lo = _number(iv[0], f"{where}.interval[0]", line)
            hi = _number(iv[1], f"{where}.interval[1]", line)
            if lo > hi:
                raise DocumentError(f"empty interval [{lo}, {hi}]", line, f"{where}.interval")
            records.append(EdgeRecord(u, v, None, (lo, hi)))
    nonedges = []
    for i, p in enumerate(raw.get("nonedges", []) or []):
        where = f"nonedges[{i}]"
        line = _line_of(text, '"nonedges"')
        if not isinstance(p, list) or len(p) != 2 or not all(x in names and _is_name(x) for x in p):
            raise DocumentError("non-edge must be a pair of declared vertices", line, where)
        if p[0] == p[1] or pair(*p) in seen:
            raise DocumentError(f"{p!r} is not a non-edge", line, where)
        nonedges.append(pair(*p))
    known = {"format_version", "vertices", "edges", "nonedges", "dim"}
    extra = {k: raw[k] for k in raw if k not in known}
    return EdcsDocument(tuple(verts), tuple(records), tuple(nonedges), dim, version, extra)


def load(path) -> EdcsDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def save(doc: EdcsDocument, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(doc.dumps())


def from_edcs(e: Edcs, nonedges=None, extra: dict | None = None) -> EdcsDocument:
    records = []
    for (u, v) in sorted_pairs(e.weights):
        lo, hi = e.weights[(u, v)]
        records.append(EdgeRecord(u, v, lo) if lo == hi else EdgeRecord(u, v, None, (lo, hi)))
    F = e.sorted_params() if nonedges is None else sorted_pairs(pair(*p) for p in nonedges)
    return EdcsDocument(tuple(e.graph.vertices), tuple(records), tuple(F), e.dim,
                        FORMAT_VERSION, dict(extra or {}))
