"""JSON forms of graphs, states, witnesses, decompositions and verdicts.

Every exact rational is written as a string (``"11/26"`` or ``"3"``) so
certificates can be re-verified exactly after a round trip. Keys and
list orders are fixed, so identical inputs serialize byte-identically.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .certificates import Biseparable, Decomposition, Gme, Inconclusive, Term
from .graphs import Bipartition, Graph, builtin_graph
from .states import GraphDiagonalState, label_from_string, label_to_string, to_fraction
from .witnesses import DiagonalWitness


class FormatError(ValueError):
    """Structurally malformed input (wrong keys, wrong types)."""


def rat(x) -> str:
    return str(to_fraction(x))


def _parse_rational(v, what: str, allow_float: bool = False) -> Fraction:
    if isinstance(v, bool):
        raise FormatError(f"{what}: booleans are not numbers")
    if isinstance(v, float):
        if not allow_float:
            raise FormatError(f"{what}: write rationals as \"p/q\" strings (got float {v!r})")
        return Fraction(repr(v))
    try:
        return to_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"{what}: cannot read {v!r} as a rational") from exc


# --------------------------------------------------------------------------
# graphs


def graph_to_json(g: Graph) -> dict:
    return g.to_json()


def graph_from_json(obj) -> Graph:
    if isinstance(obj, str):
        return builtin_graph(obj)
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise FormatError('graph must be a builtin name or {"n": ..., "edges": [...]}')
    n, edges = obj["n"], obj["edges"]
    if not isinstance(n, int) or not isinstance(edges, list):
        raise FormatError("graph fields have the wrong type")
    pairs = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(v, int) for v in e):
            raise FormatError(f"edge {e!r} is not a pair of qubit indices")
        pairs.append(tuple(e))
    return Graph.from_edges(n, pairs)


# --------------------------------------------------------------------------
# states


def _label_map(vec, n: int) -> dict:
    return {label_to_string(k, n): rat(v) for k, v in enumerate(vec) if v}


def state_to_json(s: GraphDiagonalState) -> dict:
    if s.exact:
        lam = _label_map(s.weights, s.n)
    else:
        lam = {label_to_string(k, s.n): v for k, v in enumerate(s.weights) if v}
    return {"graph": graph_to_json(s.graph), "lambda": lam}


def _weights_from(obj: dict, n: int, key_map: str, key_array: str, allow_float: bool) -> list:
    dim = 1 << n
    if key_map in obj:
        m = obj[key_map]
        if not isinstance(m, dict):
            raise FormatError(f"{key_map!r} must be an object keyed by sign labels")
        w = [Fraction(0)] * dim
        for lab, v in m.items():
            try:
                k = label_from_string(lab)
            except ValueError as exc:
                raise FormatError(str(exc)) from exc
            if len(lab.strip()) != n:
                raise FormatError(f"label {lab!r} has wrong length for n={n}")
            w[k] += _parse_rational(v, f"{key_map}[{lab}]", allow_float)
        return w
    if key_array in obj:
        arr = obj[key_array]
        if not isinstance(arr, list) or len(arr) != dim:
            raise FormatError(f"{key_array!r} must list {dim} entries")
        return [_parse_rational(v, f"{key_array}[{i}]", allow_float) for i, v in enumerate(arr)]
    raise FormatError(f"need {key_map!r} or {key_array!r}")


def state_from_json(obj, allow_float: bool = False) -> GraphDiagonalState:
    """Parse a state. With ``allow_float`` JSON numbers are read by their
    decimal form and the weights are rescaled to sum to one."""
    if not isinstance(obj, dict) or "graph" not in obj:
        raise FormatError('state must be an object with a "graph" entry')
    g = graph_from_json(obj["graph"])
    w = _weights_from(obj, g.n, "lambda", "lambda_array", allow_float)
    if allow_float:
        total = sum(w)
        if total <= 0:
            raise ValueError("weights sum to zero")
        w = [v / total for v in w]
    return GraphDiagonalState(g, tuple(w))


# --------------------------------------------------------------------------
# witnesses


def witness_to_json(w: DiagonalWitness) -> dict:
    out = {"graph": graph_to_json(w.graph), "coeffs": _label_map(w.coeffs, w.n),
           "name": w.name, "kind": w.kind}
    if w.parts:
        out["parts"] = [m.label() for m in w.parts]
    if w.note:
        out["note"] = w.note
    return out


def witness_from_json(obj) -> DiagonalWitness:
    if not isinstance(obj, dict) or "graph" not in obj:
        raise FormatError('witness must be an object with a "graph" entry')
    g = graph_from_json(obj["graph"])
    c = _weights_from(obj, g.n, "coeffs", "coeffs_array", False)
    parts = tuple(Bipartition.parse(g.n, p) for p in obj.get("parts", []))
    return DiagonalWitness(g, tuple(c), obj.get("name", ""), obj.get("kind", "strict"), parts,
                           obj.get("note", ""))


# --------------------------------------------------------------------------
# decompositions and verdicts


def term_to_json(t: Term) -> dict:
    out = {"weight": rat(t.weight), "tag": t.tag, "partition": t.partition.label(),
           "lambda": _label_map(t.component.weights, t.component.n)}
    if t.note:
        out["note"] = t.note
    return out


def decomposition_to_json(d: Decomposition) -> dict:
    return {"state": state_to_json(d.state), "terms": [term_to_json(t) for t in d.terms]}


def decomposition_from_json(obj) -> Decomposition:
    if not isinstance(obj, dict) or "state" not in obj or "terms" not in obj:
        raise FormatError('decomposition needs "state" and "terms"')
    s = state_from_json(obj["state"])
    terms = []
    for t in obj["terms"]:
        comp = GraphDiagonalState(s.graph, tuple(_weights_from(t, s.n, "lambda", "lambda_array", False)))
        terms.append(Term(_parse_rational(t["weight"], "weight"), comp, t["tag"],
                          Bipartition.parse(s.n, t["partition"]), t.get("note", "")))
    return Decomposition(s, tuple(terms))


def _threshold_json(th):
    if th is None:
        return None
    if isinstance(th, tuple):
        return [rat(x) for x in th]
    return rat(th)


def verdict_to_json(v) -> dict:
    out = {"verdict": v.verdict}
    if isinstance(v, Gme):
        out["certificate"] = {"witness": witness_to_json(v.witness), "value": rat(v.value)}
    elif isinstance(v, Biseparable):
        out["certificate"] = {"decomposition": decomposition_to_json(v.decomposition)}
    elif isinstance(v, Inconclusive):
        out["reason"] = v.reason
        if v.certificate is not None:
            out["certificate"] = {"lp": lp_certificate_to_json(v.certificate)}
    th = _threshold_json(v.threshold)
    if th is not None:
        out["threshold"] = th
    return out


def verdict_from_json(obj):
    kind = obj.get("verdict")
    th = obj.get("threshold")
    if isinstance(th, list):
        th = tuple(to_fraction(x) for x in th)
    elif th is not None:
        th = to_fraction(th)
    cert = obj.get("certificate", {})
    if kind == "GME":
        return Gme(witness_from_json(cert["witness"]), to_fraction(cert["value"]), th)
    if kind == "BISEPARABLE":
        return Biseparable(decomposition_from_json(cert["decomposition"]), th)
    if kind == "INCONCLUSIVE":
        return Inconclusive(obj.get("reason", ""), None, th)
    raise FormatError(f"unknown verdict {kind!r}")


def lp_certificate_to_json(cert) -> dict:
    n = cert.graph.n
    if cert.feasible:
        return {"feasible": True,
                "components": {m.label(): _label_map(x, n)
                               for m, x in sorted(cert.components.items(), key=lambda kv: kv[0].sort_key())}}
    return {"feasible": False, "y": _label_map(cert.y, n), "parts": [m.label() for m in cert.parts],
            "value": rat(cert.value)}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
