"""Linear-polytope descriptions of 2D Cayley configuration spaces: triangle
inequalities of 2-tree completions, Fourier-Motzkin projection, sampling."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .characterize import check_parameter_set
from .decompose import decompose_all
from .edcs import Edcs
from .errors import BadParameterSet, EmptyConfigurationSpace, InputError, NotPolytopeRepresentable
from .graph import Graph, pair, pair_key, sorted_pairs, sorted_vertices, vkey
from .minors import complete_to_k_tree, is_partial_two_tree, series_parallel_order

FEAS_TOL = 1e-9


class Status(str, enum.Enum):
    VERIFIED = "verified"
    CONDITIONAL = "conditional-on-components"
    UNKNOWN = "unknown"
    EMPTY = "empty"


def param_name(p) -> str:
    return f"x({p[0]},{p[1]})"


@dataclass(frozen=True)
class Inequality:
    """``sum(coef * x[param]) <= bound``."""

    coeffs: tuple  # ((pair, coef), ...) in canonical pair order
    bound: float
    provenance: str = ""

    def lhs(self, values: dict) -> float:
        return sum(c * values[p] for p, c in self.coeffs)

    def slack(self, values: dict) -> float:
        return self.bound - self.lhs(values)

    def key(self):
        return tuple((pair_key(p), round(c, 12)) for p, c in self.coeffs)

    def render(self) -> str:
        if len(self.coeffs) == 1:
            (p, c), = self.coeffs
            if c > 0:
                return f"{param_name(p)} <= {_num(self.bound / c)}"
            return f"{param_name(p)} >= {_num(self.bound / c)}"
        terms = []
        for p, c in self.coeffs:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{_num(abs(c))}*"
            terms.append(f"{sign} {mag}{param_name(p)}")
        text = " ".join(terms).lstrip("+ ")
        if text.startswith("- "):
            text = "-" + text[2:]
        return f"{text or '0'} <= {_num(self.bound)}"


def _num(x: float) -> str:
    x = float(x) + 0.0
    return f"{x:.12g}"


def _make_ineq(coeffs: dict, bound: float, provenance: str) -> Inequality:
    items = tuple((p, float(c)) for p, c in sorted(coeffs.items(), key=lambda t: pair_key(t[0]))
                  if abs(c) > 1e-15)
    return Inequality(items, float(bound), provenance)


@dataclass(frozen=True)
class CayleyPoint:
    values: dict

    def __getitem__(self, p):
        return self.values[pair(*p)]

    def restricted(self, params) -> "CayleyPoint":
        return CayleyPoint({pair(*p): self.values[pair(*p)] for p in params})


def as_point(x) -> dict:
    vals = x.values if isinstance(x, CayleyPoint) else x
    return {pair(*p): float(v) for p, v in vals.items()}


@dataclass
class ComponentRecord:
    """One minimal component of g + F together with its 2-tree completion."""

    vertices: list
    edges: list  # edges of the completed 2-tree
    aux: list  # completion pairs D_C
    params: list  # F members inside the component
    status: Status = Status.VERIFIED


@dataclass
class CayleyPolytope:
    parameters: list
    F: list
    D: list
    inequalities: list
    construction_order: list
    nonemptiness_status: Status
    components: list = field(default_factory=list)
    free_components: list = field(default_factory=list)
    source: Edcs | None = None

    # ------------------------------------------------------------ matrix form
    def matrix(self, params=None):
        params = self.parameters if params is None else params
        idx = {p: i for i, p in enumerate(params)}
        A = np.zeros((len(self.inequalities), len(params)))
        b = np.zeros(len(self.inequalities))
        for r, q in enumerate(self.inequalities):
            for p, c in q.coeffs:
                # parameters outside ``params`` are fixed by the caller
                if p in idx:
                    A[r, idx[p]] += c
            b[r] = q.bound
        return A, b

    def contains(self, x, tol: float = FEAS_TOL) -> bool:
        vals = as_point(x)
        return all(q.slack(vals) >= -tol for q in self.inequalities)

    def violations(self, x, tol: float = FEAS_TOL) -> list:
        vals = as_point(x)
        return [q for q in self.inequalities if q.slack(vals) < -tol]

    def interval(self, param, fixed: dict | None = None):
        """Range of ``param`` over the polytope slice given ``fixed`` values; None if empty."""
        param = pair(*param)
        fixed = {pair(*p): float(v) for p, v in (fixed or {}).items()}
        free = [p for p in self.parameters if p not in fixed]
        if param not in free:
            raise InputError(f"{param!r} is not a free parameter")
        if len(free) == 1:
            return self._interval_1d(param, fixed)
        A, b = self.matrix(free)
        shift = np.zeros(len(self.inequalities))
        for r, q in enumerate(self.inequalities):
            shift[r] = sum(c * fixed[p] for p, c in q.coeffs if p in fixed)
        rhs = b - shift + FEAS_TOL
        j = free.index(param)
        out = []
        for sign in (1.0, -1.0):
            c = np.zeros(len(free))
            c[j] = sign
            res = linprog(c, A_ub=A, b_ub=rhs, bounds=[(None, None)] * len(free), method="highs")
            if res.status == 2:
                return None
            if res.status == 3:
                out.append(sign * -math.inf if sign > 0 else math.inf)
                continue
            if res.status != 0:
                return None
            out.append(sign * res.fun)
        lo, hi = out
        return max(lo, 0.0), hi

    def _interval_1d(self, param, fixed):
        lo, hi = 0.0, math.inf
        for q in self.inequalities:
            c = 0.0
            rest = 0.0
            for p, coef in q.coeffs:
                if p == param:
                    c += coef
                else:
                    rest += coef * fixed[p]
            rhs = q.bound - rest
            if abs(c) < 1e-15:
                if rhs < -FEAS_TOL:
                    return None
                continue
            if c > 0:
                hi = min(hi, rhs / c)
            else:
                lo = max(lo, rhs / c)
        if lo > hi + FEAS_TOL:
            return None
        return lo, max(lo, hi)

    def feasible(self, fixed: dict | None = None) -> bool:
        fixed = {pair(*p): float(v) for p, v in (fixed or {}).items()}
        free = [p for p in self.parameters if p not in fixed]
        if not free:
            return self.contains(fixed)
        return self.interval(free[0], fixed) is not None

    def intervals(self) -> dict:
        """Projection of the polytope onto each parameter axis."""
        return {p: self.interval(p) for p in self.parameters}

    def render(self) -> list:
        return [q.render() for q in self.inequalities]


# ---------------------------------------------------------------- construction


def _triangles(g: Graph) -> list:
    out = []
    for u, v in g.sorted_edges():
        for w in sorted_vertices(g.neighbors(u) & g.neighbors(v)):
            if vkey(w) > vkey(v):
                out.append((u, v, w))
    return out


def _triangle_inequalities(tri, side) -> list:
    """Triangle inequalities for ``tri``; ``side(a, b)`` is a float or a parameter pair."""
    a, b, c = tri
    sides = [side(a, b), side(a, c), side(b, c)]
    out = []
    for i in range(3):
        coeffs = {}
        const = 0.0
        for j, s in enumerate(sides):
            sign = 1.0 if i == j else -1.0
            if isinstance(s, tuple):
                coeffs[s] = coeffs.get(s, 0.0) + sign
            else:
                const += sign * s
        # sum(coeffs) + const <= 0
        out.append((coeffs, -const))
    return out


def _component_inequalities(comp: Graph, completion: list, side, label: str):
    ineqs = []
    const_violation = False
    tree = comp.add_edges(completion)
    for tri in _triangles(tree):
        for coeffs, bound in _triangle_inequalities(tri, side):
            coeffs = {p: c for p, c in coeffs.items() if c != 0}
            if not coeffs:
                if bound < -FEAS_TOL:
                    const_violation = True
                    ineqs.append(_make_ineq({}, bound, f"{label} triangle {tri}"))
                continue
            ineqs.append(_make_ineq(coeffs, bound, f"{label} triangle {tri}"))
    return ineqs, const_violation, tree


def _prune(ineqs: list, keep: set) -> list:
    """Drop duplicates and inequalities dominated by one with the same normal.

    Inequalities whose ids are in ``keep`` (nonnegativity) always stay.
    """
    groups = {}
    order = []
    for q in ineqs:
        k = q.key()
        if k not in groups:
            groups[k] = []
            order.append(k)
        groups[k].append(q)
    out = []
    for k in order:
        kept = [q for q in groups[k] if id(q) in keep]
        rest = [q for q in groups[k] if id(q) not in keep]
        floor = min((q.bound for q in kept), default=math.inf)
        if rest:
            best = min(rest, key=lambda q: q.bound)
            if best.bound < floor - 1e-15:
                kept = kept + [best]
        out.extend(q for q in groups[k] if any(q is x for x in kept))
    return out


def _build_order(tree: Graph, params: set) -> list:
    order = series_parallel_order(tree) or []
    seen = []
    for v, nbrs in reversed(order):
        for w in nbrs:
            p = pair(v, w)
            if p in params and p not in seen:
                seen.append(p)
    return seen


def _free_component_status(comp: Graph, lengths: dict) -> tuple[Status, list, list]:
    """Nonemptiness status of a component that holds no parameter."""
    if comp.n <= 2:
        return Status.VERIFIED, [], []
    if not is_partial_two_tree(comp):
        return Status.CONDITIONAL, [], []
    aux = complete_to_k_tree(comp, 2)
    auxset = set(aux)
    side = lambda a, b: pair(a, b) if pair(a, b) in auxset else lengths[pair(a, b)]
    ineqs, bad, _ = _component_inequalities(comp, aux, side, "free")
    if bad:
        return Status.EMPTY, aux, ineqs
    ineqs += [_make_ineq({p: -1.0}, 0.0, "nonnegativity") for p in aux]
    if aux:
        sub = CayleyPolytope(list(aux), [], list(aux), ineqs, list(aux), Status.UNKNOWN)
        if not sub.feasible():
            return Status.EMPTY, aux, ineqs
    return Status.VERIFIED, aux, ineqs


def polytope_description(e: Edcs) -> CayleyPolytope:
    """Triangle-inequality description of the Cayley space of ``e`` on its parameters."""
    if not e.is_point:
        raise InputError("interval weights: apply subdivide_for_intervals first")
    if e.dim != 2:
        raise InputError("linear polytope descriptions exist for 2D systems only")
    F = e.sorted_params()
    if not F:
        raise BadParameterSet("parameter set is empty")
    rep = check_parameter_set(e.graph, F)
    if not rep.linear_polytope:
        raise NotPolytopeRepresentable(
            "some minimal 2-sum component containing parameters is not a partial 2-tree: "
            + ", ".join(repr(w) for w in rep.witnesses))
    lengths = e.lengths()
    Fset = set(F)
    h = e.graph.add_edges(F)
    ineqs = []
    D = []
    order = []
    comps = []
    free = []
    status = Status.VERIFIED
    for dec in decompose_all(h):
        for c in dec.components:
            cg = c.graph
            inside = [f for f in F if c.contains_pair(f)]
            if not inside:
                st, aux, _ = _free_component_status(cg, lengths)
                free.append(ComponentRecord(sorted_vertices(cg.vertices), cg.sorted_edges(), aux, [], st))
                if st == Status.EMPTY:
                    status = Status.EMPTY
                elif st == Status.CONDITIONAL and status == Status.VERIFIED:
                    status = Status.CONDITIONAL
                continue
            aux = complete_to_k_tree(cg, 2) if cg.n >= 3 else []
            auxset = set(aux)

            def side(a, b, auxset=auxset):
                p = pair(a, b)
                if p in Fset or p in auxset:
                    return p
                return lengths[p]

            cineqs, bad, tree = _component_inequalities(cg, aux, side, f"component {len(comps)}")
            if bad:
                status = Status.EMPTY
            ineqs += cineqs
            D += [p for p in aux if p not in D]
            params_here = set(inside) | auxset
            order += [p for p in _build_order(tree, params_here) if p not in order]
            comps.append(ComponentRecord(sorted_vertices(cg.vertices), tree.sorted_edges(), aux, inside))
    D = sorted_pairs(D)
    params = F + D
    nonneg = [_make_ineq({p: -1.0}, 0.0, "nonnegativity") for p in params]
    keep = {id(q) for q in nonneg}
    ineqs = _prune(nonneg + ineqs, keep)
    order += [p for p in params if p not in order]
    poly = CayleyPolytope(params, F, D, ineqs, order, status, comps, free, e)
    if status != Status.EMPTY and not poly.feasible():
        poly.nonemptiness_status = Status.EMPTY
    return poly


# ---------------------------------------------------------------- projection


def _normalize(q: Inequality) -> Inequality:
    scale = max((abs(c) for _, c in q.coeffs), default=1.0)
    if scale == 0:
        return q
    return Inequality(tuple((p, c / scale) for p, c in q.coeffs), q.bound / scale, q.provenance)


def _lp_redundant(q: Inequality, others: list, params: list) -> bool:
    if not others:
        return False
    idx = {p: i for i, p in enumerate(params)}
    A = np.zeros((len(others), len(params)))
    b = np.array([o.bound for o in others])
    for r, o in enumerate(others):
        for p, c in o.coeffs:
            A[r, idx[p]] = c
    c = np.zeros(len(params))
    for p, coef in q.coeffs:
        c[idx[p]] = -coef
    res = linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * len(params), method="highs")
    return res.status == 0 and -res.fun <= q.bound + 1e-9


def project_out_auxiliary(p: CayleyPolytope, lp_prune_above: int = 40) -> CayleyPolytope:
    """Fourier-Motzkin elimination of the auxiliary completion parameters."""
    if not p.D:
        return p
    ineqs = [_normalize(q) for q in p.inequalities]
    for y in p.D:
        pos, neg, zero = [], [], []
        for q in ineqs:
            c = dict(q.coeffs).get(y, 0.0)
            (pos if c > 0 else neg if c < 0 else zero).append((q, c))
        new = [q for q, _ in zero]
        for qp, cp in pos:
            for qn, cn in neg:
                coeffs = {}
                for pp, c in qp.coeffs:
                    coeffs[pp] = coeffs.get(pp, 0.0) + c / cp
                for pp, c in qn.coeffs:
                    coeffs[pp] = coeffs.get(pp, 0.0) + c / -cn
                coeffs.pop(y, None)
                coeffs = {k: v for k, v in coeffs.items() if abs(v) > 1e-12}
                bound = qp.bound / cp + qn.bound / -cn
                if not coeffs:
                    if bound < -FEAS_TOL:
                        new.append(Inequality((), bound, f"eliminate {param_name(y)}"))
                    continue
                new.append(_normalize(_make_ineq(coeffs, bound, f"eliminate {param_name(y)}")))
        keep = {id(q) for q in new if q.provenance == "nonnegativity"}
        ineqs = _prune(new, keep)
    F = list(p.F)
    if len(ineqs) > lp_prune_above:
        kept = []
        for i, q in enumerate(ineqs):
            if q.provenance == "nonnegativity" or not q.coeffs:
                kept.append(q)
                continue
            rest = kept + ineqs[i + 1:]
            if not _lp_redundant(q, rest, F):
                kept.append(q)
        ineqs = kept
    order = [x for x in p.construction_order if x in F]
    return CayleyPolytope(F, F, [], ineqs, order, p.nonemptiness_status, p.components,
                          p.free_components, p.source)


# ---------------------------------------------------------------- sampling


def sample(p: CayleyPolytope, count: int, seed: int = 0) -> list:
    """Sequential conditional-interval sampling; every point satisfies all inequalities.

    Each parameter (in ``parameters`` order: F first, then D) is drawn
    uniformly from its exact feasible range given the values already fixed.
    Convexity guarantees the range is an interval and later parameters stay
    feasible. Uniformity over the polytope is not claimed.
    """
    if p.nonemptiness_status == Status.UNKNOWN:
        raise InputError("polytope nonemptiness is unknown; cannot sample")
    if p.nonemptiness_status == Status.EMPTY:
        bad = [c for c in p.free_components if c.status == Status.EMPTY]
        raise EmptyConfigurationSpace("configuration space is empty", component=bad[0] if bad else None)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        fixed = {}
        for prm in p.parameters:
            iv = p.interval(prm, fixed)
            if iv is None:
                comp = next((c for c in p.components if prm in c.params or prm in c.aux), None)
                raise EmptyConfigurationSpace(f"empty feasible interval for {param_name(prm)}", component=comp)
            lo, hi = iv
            if not math.isfinite(hi):
                raise InputError(f"parameter {param_name(prm)} is unbounded")
            hi = max(hi, lo)
            fixed[prm] = float(rng.uniform(lo, hi)) if hi - lo > 1e-12 else float(lo)
        out.append(CayleyPoint(fixed))
    return out


def squared_midpoint(a, b) -> CayleyPoint:
    """Componentwise sqrt((a^2 + b^2) / 2): the midpoint in squared coordinates."""
    va, vb = as_point(a), as_point(b)
    if set(va) != set(vb):
        raise InputError("points have different parameter sets")
    return CayleyPoint({p: math.sqrt((va[p] ** 2 + vb[p] ** 2) / 2) for p in sorted_pairs(va)})
