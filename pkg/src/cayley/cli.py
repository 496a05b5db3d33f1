"""Command-line interface.

Exit codes: 0 success or verdict true, 2 input error, 3 characterization
false, 4 infeasible or no witness. Results go to stdout as JSON; diagnostics
go to stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import io
from .characterize import (admits_efficient_space, check_parameter_set, check_parameter_set_interval,
                           single_interval_nonedge, universal_inherence)
from .decompose import two_sum_decompose
from .edcs import Edcs
from .errors import CayleyError, CharacterizationError, InfeasibleError, InputError, OracleInapplicable
from .graph import Graph, pair, sorted_pairs, sorted_vertices
from .laman import laman_classify
from .minors import complete_to_k_tree, is_partial_k_tree

EXIT_OK, EXIT_INPUT, EXIT_FALSE, EXIT_INFEASIBLE = 0, 2, 3, 4


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, default=_json_default) + "\n")


def _json_default(x):
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    if hasattr(x, "item"):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _num(x: float):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _name(token: str, vertices):
    token = token.strip()
    if token in vertices:
        return token
    try:
        v = int(token)
    except ValueError:
        v = None
    if v is not None and v in vertices:
        return v
    raise InputError(f"unknown vertex {token!r}")


def _parse_pair(text: str, vertices):
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError(f"expected a pair 'u,v', got {text!r}")
    return pair(_name(parts[0], vertices), _name(parts[1], vertices))


def _pairs(pairs) -> list:
    return [list(p) for p in sorted_pairs(pairs)]


def _graph_json(g: Graph) -> dict:
    return {"vertices": list(g.vertices), "edges": _pairs(g.edges)}


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CAYLEY_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"CAYLEY_SEED must be an integer, got {env!r}") from exc


def _load(args):
    doc = io.load(args.path)
    dim = getattr(args, "dim", None)
    e = doc.to_edcs()
    if dim is not None:
        e = e.with_dim(dim)
    return doc, e


# ---------------------------------------------------------------- subcommands


def cmd_analyze(args) -> int:
    doc, e = _load(args)
    g = e.graph
    out = {"dim": e.dim}
    if e.dim == 2:
        lc = laman_classify(g)
        out["laman"] = {"tag": lc.tag.value, "dof": lc.dof, "rank": lc.rank, "rigid": lc.rigid}
    if g.is_connected():
        dec = two_sum_decompose(g)
        out["decomposition"] = {
            "components": len(dec.components),
            "minimal": sum(1 for m in dec.minimal_flags if m),
        }
    verdict = None
    if args.nonedge:
        f = _parse_pair(args.nonedge, g.vertices)
        v = single_interval_nonedge(g, f)
        out["single_interval"] = {"nonedge": list(f), "verdict": v.single_interval,
                                  "offenders": [_graph_json(c) for c in v.offenders]}
        verdict = v.single_interval
    else:
        F = None
        if args.params_file:
            try:
                with open(args.params_file, encoding="utf-8") as fh:
                    raw = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read parameter file: {exc}") from exc
            F = [_parse_pair(f"{p[0]},{p[1]}", g.vertices) for p in raw]
        elif doc.nonedges:
            F = list(doc.nonedges)
        if F is not None and e.dim == 2:
            rep = check_parameter_set(g, F) if e.is_point else check_parameter_set_interval(e, F)
            out["parameter_set"] = {"F": _pairs(F), "verdict": rep.linear_polytope,
                                    "generically_complete": rep.generically_complete,
                                    "offenders": [_graph_json(c) for c in rep.witnesses]}
            verdict = rep.linear_polytope
        else:
            ok = universal_inherence(g, e.dim)
            out["universal_inherence"] = {"dim": e.dim, "verdict": ok}
            verdict = ok
    out["verdict"] = verdict
    _emit(out)
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_decompose(args) -> int:
    _, e = _load(args)
    dec = two_sum_decompose(e.graph)
    comps = []
    for c, minimal in zip(dec.components, dec.minimal_flags):
        comps.append({"vertices": sorted_vertices(c.vertices), "edges": _pairs(c.real_edges),
                      "virtual": _pairs(c.virtual), "minimal": bool(minimal)})
    tree = [{"a": a, "b": b, "label": list(lab) if isinstance(lab, tuple) else lab} for a, b, lab in dec.tree]
    _emit({"components": comps, "tree": tree})
    return EXIT_OK


def cmd_complete(args) -> int:
    _, e = _load(args)
    if e.dim == 2:
        F, rep = admits_efficient_space(e.graph)
        _emit({"F": None if F is None else _pairs(F), "generically_complete": rep.generically_complete})
        return EXIT_OK if F is not None else EXIT_FALSE
    if not is_partial_k_tree(e.graph, 3):
        _emit({"F": None, "generically_complete": False})
        return EXIT_FALSE
    aux = complete_to_k_tree(e.graph, 3)
    _emit({"F": _pairs(aux) if aux else None, "generically_complete": True})
    return EXIT_OK if aux else EXIT_FALSE


def _edcs_with_params(doc, e: Edcs) -> Edcs:
    if e.params:
        return e
    F, _ = admits_efficient_space(e.graph)
    if not F:
        raise CharacterizationError("no parameter set given and none admits a polytope description")
    return e.with_params(F)


def _polytope(args):
    from .polytope import polytope_description, project_out_auxiliary

    doc, e = _load(args)
    e = _edcs_with_params(doc, e)
    p = polytope_description(e)
    if getattr(args, "project", False):
        p = project_out_auxiliary(p)
    return e, p


def cmd_polytope(args) -> int:
    from .polytope import param_name

    _, p = _polytope(args)
    out = {
        "parameters": [param_name(x) for x in p.parameters],
        "F": _pairs(p.F),
        "D": _pairs(p.D),
        "inequalities": p.render(),
        "intervals": {param_name(k): None if v is None else [_num(v[0]), _num(v[1])]
                      for k, v in p.intervals().items()},
        "construction_order": [param_name(x) for x in p.construction_order],
        "status": p.nonemptiness_status.value,
    }
    _emit(out)
    return EXIT_OK


def cmd_sample(args) -> int:
    from .polytope import param_name, sample
    from .realize import realize_from_config

    seed = _seed(args)
    e, p = _polytope(args)
    pts = sample(p, args.count, seed)
    out = {"seed": seed, "samples": [{param_name(k): v for k, v in pt.values.items()} for pt in pts]}
    if args.svg:
        if e.dim != 2:
            raise InputError("SVG output is only available in 2D")
        reals = [realize_from_config(e, pt.restricted(e.sorted_params())) for pt in pts]
        _write_svg(args.svg, reals, e.graph)
        out["svg"] = args.svg
    _emit(out)
    return EXIT_OK


def _read_config(text: str, vertices) -> dict:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"configuration is not JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InputError("configuration must map 'u,v' to a length")
    return {_parse_pair(k, vertices): float(v) for k, v in raw.items()}


def _read_base(path, dim):
    from .realize import Realization

    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read base realization: {exc}") from exc
    pts = raw.get("points", raw)
    out = {}
    for k, v in pts.items():
        try:
            key = int(k)
        except ValueError:
            key = k
        out[key] = [float(c) for c in v]
    return Realization(dim, out)


def cmd_realize(args) -> int:
    from .polytope import sample
    from .realize import realize_from_config, realize_k_tree, verify_realization
    from .minors import is_k_tree

    seed = _seed(args)
    doc, e = _load(args)
    base = _read_base(args.base, e.dim) if args.base else None
    out = {"seed": seed}
    if args.config:
        x = _read_config(args.config, e.graph.vertices)
        e = e.with_params(sorted_pairs(set(e.params) | set(x)))
        r = realize_from_config(e, x, base=base)
    elif is_k_tree(e.graph, e.dim):
        r = realize_k_tree(e)
    else:
        from .polytope import polytope_description

        e = _edcs_with_params(doc, e)
        x = sample(polytope_description(e), 1, seed)[0]
        out["config"] = {f"{u},{v}": val for (u, v), val in x.values.items()}
        r = realize_from_config(e, x.restricted(e.sorted_params()), base=base)
    rep = verify_realization(r, e)
    out["points"] = {str(k): v for k, v in r.coords().items()}
    out["max_error"] = rep.max_error
    if args.svg:
        if e.dim != 2:
            raise InputError("SVG output is only available in 2D")
        _write_svg(args.svg, [r], e.graph)
        out["svg"] = args.svg
    _emit(out)
    return EXIT_OK


def cmd_witness(args) -> int:
    from .witness import base_case_witness_2d, three_d_witness

    doc, e = _load(args)
    if args.dim == 3:
        (_, F), w = three_d_witness(e.graph, t=args.t)
    else:
        if not args.nonedge and len(doc.nonedges) != 1:
            raise InputError("give --nonedge u,v (or exactly one non-edge in the document)")
        f = _parse_pair(args.nonedge, e.graph.vertices) if args.nonedge else doc.nonedges[0]
        w = base_case_witness_2d(e.graph, f)
        F = [f]
    extra = {"expected_values": w.expected_values, "target": w.target}
    wdoc = io.from_edcs(w.edcs, F, extra)
    if args.output:
        io.save(wdoc, args.output)
    _emit({"edcs": wdoc.to_json(), "expected_values": w.expected_values, "target": w.target,
           "output": args.output})
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import cayley_space_oracle

    doc, e = _load(args)
    if args.nonedge:
        f = _parse_pair(args.nonedge, e.graph.vertices)
    elif len(doc.nonedges) == 1:
        f = doc.nonedges[0]
    else:
        raise InputError("give --nonedge u,v (or exactly one non-edge in the document)")
    iset = cayley_space_oracle(e.with_params([]), f, grid=args.grid)
    _emit({"nonedge": list(f), "grid": args.grid,
           "intervals": [[_num(lo), _num(hi)] for lo, hi in iset.intervals]})
    return EXIT_OK if len(iset) else EXIT_INFEASIBLE


# ---------------------------------------------------------------- SVG


def _write_svg(path: str, realizations: list, g: Graph) -> None:
    """One group per realization (edge lines and vertex dots) in a unit viewBox."""
    xs = [p[0] for r in realizations for p in r.points.values()]
    ys = [p[1] for r in realizations for p in r.points.values()]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0, 1e-12)

    def tr(p):
        # flip y so the picture reads with y up
        return (p[0] - x0) / span, 1.0 - (p[1] - y0) / span

    lines = ['<svg xmlns="http://www.w3.org/2000/svg" viewBox="-0.05 -0.05 1.1 1.1">']
    for i, r in enumerate(realizations):
        lines.append(f'  <g id="realization-{i}" stroke="black" stroke-width="0.004" fill="black">')
        for u, v in g.sorted_edges():
            (ax, ay), (bx, by) = tr(r.points[u]), tr(r.points[v])
            lines.append(f'    <polyline points="{ax:.6f},{ay:.6f} {bx:.6f},{by:.6f}" fill="none"/>')
        for v in g.vertices:
            x, y = tr(r.points[v])
            lines.append(f'    <circle cx="{x:.6f}" cy="{y:.6f}" r="0.01"><title>{v}</title></circle>')
        lines.append("  </g>")
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cayley", description="Cayley configuration spaces of distance constraint systems")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("path", help="EDCS document (JSON)")
        p.set_defaults(fn=fn)
        return p

    p = add("analyze", cmd_analyze, "Laman class, decomposition and characterization verdicts")
    p.add_argument("--dim", type=int, choices=(2, 3))
    p.add_argument("--nonedge", help="non-edge u,v for the single-interval verdict")
    p.add_argument("--params-file", help="JSON list of [u, v] pairs forming the parameter set")
    add("decompose", cmd_decompose, "2-sum decomposition")
    add("complete", cmd_complete, "suggested parameter set F")
    p = add("polytope", cmd_polytope, "linear polytope description")
    p.add_argument("--project", action="store_true", help="project out auxiliary completion parameters")
    p = add("sample", cmd_sample, "sample configurations from the polytope")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--project", action="store_true")
    p.add_argument("--svg", help="write realizations of the samples (2D)")
    p = add("realize", cmd_realize, "Cartesian realization")
    p.add_argument("--config", help="JSON object (or file) mapping 'u,v' to a length")
    p.add_argument("--base", help="JSON file with base coordinates")
    p.add_argument("--seed", type=int)
    p.add_argument("--svg", help="write the realization as SVG (2D)")
    p = add("witness", cmd_witness, "distance assignment with a disconnected configuration space")
    p.add_argument("--nonedge")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--t", type=float, default=1.0, help="K2,2,2 construction parameter")
    p.add_argument("-o", "--output", help="write the witness document here")
    p = add("oracle", cmd_oracle, "brute-force configuration space of one non-edge")
    p.add_argument("--nonedge")
    p.add_argument("--grid", type=int, default=400)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "count", 1) is not None and getattr(args, "count", 1) < 0:
        print("error: --count must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args)
    except (InputError, OracleInapplicable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CharacterizationError as exc:
        print(f"characterization: {exc}", file=sys.stderr)
        return EXIT_FALSE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CayleyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
