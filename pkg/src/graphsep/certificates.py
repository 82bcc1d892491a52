"""Verdicts, biseparable decompositions and their independent re-checks.

A :class:`Decomposition` writes a state as ``sum_i w_i rho_i`` with each
``rho_i`` a normalized graph-diagonal state that is separable across a
named bipartition. Separability of a component is never taken on trust;
:func:`check_term` certifies it with checkable surrogates:

* the component is PPT across the bipartition (exact, via transfer
  matrices), and
* either the bipartition carries at most one Bell pair of the pure graph
  state (for graph-diagonal states PPT is then equivalent to separability),
  or the component's rank does not exceed the larger rank of its two
  reductions (PPT states of such low rank are separable).

Tags record why the component is separable and add tag-specific checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import Bipartition, Graph, builtin_graph, cut_rank, star_graph
from .states import GraphDiagonalState, label_to_string, to_fraction

TAGS = ("PairLemma2", "BellMixture", "GhzMixture", "SmolinBased", "PptRank4", "Explicit")

DENSE_CHECK_MAX_QUBITS = 5


@dataclass(frozen=True)
class Term:
    weight: Fraction
    component: GraphDiagonalState
    tag: str
    partition: Bipartition
    note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "weight", to_fraction(self.weight))
        if self.tag not in TAGS:
            raise ValueError(f"unknown certificate tag {self.tag!r}")


@dataclass(frozen=True)
class Decomposition:
    state: GraphDiagonalState
    terms: tuple

    def reassembled(self) -> list:
        dim = 1 << self.state.n
        acc = [Fraction(0)] * dim
        for t in self.terms:
            for k, v in enumerate(t.component.weights):
                if v:
                    acc[k] += t.weight * v
        return acc

    def tag_counts(self) -> dict:
        out = {}
        for t in self.terms:
            out[t.tag] = out.get(t.tag, 0) + 1
        return out


def make_term(g: Graph, weights, tag: str, partition: Bipartition, note: str = "") -> Term:
    """Normalize an unnormalized weight vector into a :class:`Term`."""
    w = [to_fraction(v) for v in weights]
    total = sum(w)
    if total <= 0:
        raise ValueError("a term needs positive total weight")
    comp = GraphDiagonalState(g, tuple(v / total for v in w))
    return Term(total, comp, tag, partition, note)


def component_from_ppt(g: Graph, m: Bipartition, x) -> Term:
    """Term from a PPT-mixture component ``x`` (unnormalized) across ``m``."""
    return make_term(g, x, "Explicit", m, note="PPT component of a 1BP-restricted mixture")


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Gme:
    witness: object  # DiagonalWitness
    value: Fraction
    threshold: object = None
    verdict: str = "GME"


@dataclass(frozen=True)
class Biseparable:
    decomposition: Decomposition
    threshold: object = None
    verdict: str = "BISEPARABLE"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    certificate: object = None
    threshold: object = None
    verdict: str = "INCONCLUSIVE"


EXIT_CODES = {"BISEPARABLE": 0, "GME": 1, "INCONCLUSIVE": 2}


# --------------------------------------------------------------------------
# checks


@dataclass
class DecompositionReport:
    ok: bool = True
    problems: list = field(default_factory=list)

    def fail(self, msg: str):
        self.ok = False
        self.problems.append(msg)

    def __bool__(self):
        return self.ok


def bell_mixture_separable(weights) -> bool:
    """Each of the four weights is at most the sum of the other three."""
    w = [to_fraction(v) for v in weights]
    if len(w) != 4 or any(v < 0 for v in w):
        return False
    total = sum(w)
    return all(2 * v <= total for v in w)


def _reduced_ranks(s: GraphDiagonalState, m: Bipartition) -> tuple:
    from . import dense

    op = dense.state_to_dense(s)
    return (dense.matrix_rank(dense.partial_trace(op, m.mask, s.n)),
            dense.matrix_rank(dense.partial_trace(op, m.complement_mask, s.n)))


def check_term(t: Term, dense: bool | None = None) -> list:
    """Problems with one term (empty list when it certifies)."""
    from . import pptmix

    problems = []
    s = t.component
    g = s.graph
    m = t.partition
    name = f"{t.tag}[{m.label()}]"
    if t.weight <= 0:
        problems.append(f"{name}: nonpositive weight {t.weight}")
    if not s.exact or s.total != 1:
        problems.append(f"{name}: component is not an exact normalized state")
        return problems
    if m.n != g.n:
        problems.append(f"{name}: partition size differs from graph")
        return problems
    if not pptmix.is_ppt_exact(s, m):
        problems.append(f"{name}: component is not PPT across {m.label()}")
        return problems
    rank_cut = cut_rank(g, m)
    if rank_cut > 1:
        ra, rb = _reduced_ranks(s, m)
        if s.rank > max(ra, rb):
            problems.append(f"{name}: {rank_cut} Bell pairs and rank {s.rank} > max reduced rank {max(ra, rb)}")
    support = s.support
    if t.tag == "PairLemma2":
        if len(support) != 2 or s.weights[support[0]] != s.weights[support[1]]:
            problems.append(f"{name}: not an equal-weight pair")
        elif g == builtin_graph("C4"):
            from .classify import lemma2_separable_pair

            if lemma2_separable_pair(*support) is None:
                pair = ", ".join(label_to_string(k, 4) for k in support)
                problems.append(f"{name}: ({pair}) differ in both end signs")
    elif t.tag == "BellMixture":
        tm = pptmix.transfer_matrix(g, m)
        block = next((b for b in tm.blocks() if set(support) <= set(b)), None)
        if block is None or len(block) != 4:
            problems.append(f"{name}: support is not inside one Bell block")
        elif not bell_mixture_separable([s.weights[k] for k in block]):
            problems.append(f"{name}: Bell-mixture inequality fails")
    elif t.tag == "GhzMixture":
        from .classify import find_graph_map

        if find_graph_map(g, star_graph(g.n)) is None:
            problems.append(f"{name}: GHZ mixtures live on star-equivalent graphs")
        elif len(support) > 2:
            problems.append(f"{name}: more than two GHZ basis states")
    elif t.tag in ("SmolinBased", "PptRank4"):
        if s.rank > 4:
            problems.append(f"{name}: rank {s.rank} exceeds 4")
    if dense is None:
        dense = g.n <= DENSE_CHECK_MAX_QUBITS
    if dense and not problems:
        from . import dense as D

        if not D.is_ppt(s, m):
            problems.append(f"{name}: dense partial transpose has a negative eigenvalue")
    return problems


def verify_decomposition(d: Decomposition, s: GraphDiagonalState | None = None,
                         dense: bool | None = None) -> DecompositionReport:
    """Exact reassembly plus a certificate check of every term."""
    report = DecompositionReport()
    s = s if s is not None else d.state
    if d.state.graph != s.graph:
        report.fail("decomposition and state live on different graphs")
        return report
    if not d.terms:
        report.fail("empty decomposition")
        return report
    for t in d.terms:
        if t.component.graph != s.graph:
            report.fail("component on a different graph")
            return report
    if d.reassembled() != [to_fraction(w) for w in s.weights]:
        report.fail("terms do not reassemble the state")
    for t in d.terms:
        for p in check_term(t, dense):
            report.fail(p)
    return report


def verify_verdict(v, s: GraphDiagonalState) -> bool:
    """Re-check the certificate carried by a verdict against ``s``."""
    from .witnesses import validate_witness

    if isinstance(v, Gme):
        w = v.witness
        if w.graph != s.graph:
            return False
        value = w.evaluate(s)
        return value < 0 and value == v.value and validate_witness(w).valid
    if isinstance(v, Biseparable):
        return verify_decomposition(v.decomposition, s).ok
    return isinstance(v, Inconclusive)
