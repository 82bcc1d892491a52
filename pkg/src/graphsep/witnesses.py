"""Witnesses diagonal in the graph basis.

A witness ``W = sum_k w_k |G_k><G_k|`` is stored as its coefficient list.
``Tr(W rho) < 0`` on a graph-diagonal state certifies genuine multipartite
entanglement whenever ``W`` is nonnegative on every biseparable state.

Two validity notions are checked exactly:

* ``strict``: ``T^(M) w >= 0`` for every bipartition ``M``, i.e. every
  partial transpose of ``W`` is positive semidefinite. All closed-form
  witnesses here are of this kind.
* ``decomposable``: ``w = p + T^(M) q`` with ``p, q >= 0`` for every ``M``,
  i.e. ``W = P + Q^{T_M}``. Farkas duals of the PPT-mixture LP have this
  form; it still makes ``W`` nonnegative on every PPT mixture.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import Graph, all_bipartitions, builtin_graph, star_graph
from .states import GraphDiagonalState, label_from_string, label_to_string, to_fraction

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DiagonalWitness:
    graph: Graph
    coeffs: tuple
    name: str = ""
    kind: str = "strict"
    parts: tuple = ()  # bipartitions a decomposable witness is certified for (empty: all)
    note: str = ""

    def __post_init__(self):
        dim = 1 << self.graph.n
        if len(self.coeffs) != dim:
            raise ValueError(f"expected {dim} coefficients, got {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(to_fraction(c) for c in self.coeffs))
        if self.kind not in ("strict", "decomposable"):
            raise ValueError(f"unknown witness kind {self.kind!r}")

    @property
    def n(self) -> int:
        return self.graph.n

    def evaluate(self, s: GraphDiagonalState):
        return evaluate(self, s)

    def trace(self) -> Fraction:
        """``Tr W`` (sum of the coefficients)."""
        return sum(self.coeffs)

    def scaled(self, factor) -> "DiagonalWitness":
        factor = to_fraction(factor)
        if factor <= 0:
            raise ValueError("only positive rescalings preserve a witness")
        return DiagonalWitness(self.graph, tuple(c * factor for c in self.coeffs), self.name,
                               self.kind, self.parts, self.note)

    def flipped(self, t: int) -> "DiagonalWitness":
        """Conjugate by the Z flips ``t``: coefficient of ``k`` moves to ``k ^ t``."""
        dim = 1 << self.n
        return DiagonalWitness(self.graph, tuple(self.coeffs[k ^ t] for k in range(dim)),
                               self.name, self.kind, self.parts, self.note)

    def as_dict(self) -> dict:
        return {label_to_string(k, self.n): c for k, c in enumerate(self.coeffs) if c}


def evaluate(w: DiagonalWitness, s: GraphDiagonalState):
    """``Tr(W rho) = sum_k w_k lambda_k``; exact for exact states."""
    if w.graph != s.graph:
        raise ValueError("witness and state live on different graphs")
    if s.exact:
        return sum(c * x for c, x in zip(w.coeffs, s.weights))
    return sum(float(c) * x for c, x in zip(w.coeffs, s.weights))


def _label(x, n: int) -> int:
    if isinstance(x, str):
        if len(x.strip()) != n:
            raise ValueError(f"label {x!r} has wrong length for n={n}")
        return label_from_string(x)
    if not 0 <= int(x) < (1 << n):
        raise ValueError("label out of range")
    return int(x)


def _half_minus(g: Graph, peak: int) -> list:
    c = [HALF] * (1 << g.n)
    c[peak] -= 1
    return c


def _require(g: Graph, name: str, what: str):
    if g != builtin_graph(name):
        raise ValueError(f"{what} is defined on the {name} graph")


def w1_witness(g: Graph | None = None, peak=0) -> DiagonalWitness:
    """``1/2 - |t><t| - 1/2 sum_ij |a' i j d'><a' i j d'|`` for the peak ``t = a b c d``.

    Primes denote flipped signs. ``peak = 0`` is the original form.
    """
    g = g or builtin_graph("C4")
    _require(g, "C4", "w1_witness")
    t = _label(peak, 4)
    c = _half_minus(g, t)
    base = t ^ 0b1001
    for mid in range(4):
        c[base ^ (mid << 1)] -= HALF
    return DiagonalWitness(g, tuple(c), name=f"W1[{label_to_string(t, 4)}]")


def w2_witness(g: Graph | None = None, peak=0, middle="++") -> DiagonalWitness:
    """``1/2 - |t><t| - |a' m n d'><a' m n d'|`` for ``t = a b c d`` and middle signs ``m n``."""
    g = g or builtin_graph("C4")
    _require(g, "C4", "w2_witness")
    t = _label(peak, 4)
    mid = _label(middle, 2) if isinstance(middle, str) else int(middle)
    second = ((t & 0b1001) ^ 0b1001) | (mid << 1)
    c = _half_minus(g, t)
    c[second] -= 1
    return DiagonalWitness(g, tuple(c), name=f"W2[{label_to_string(t, 4)},{label_to_string(second, 4)}]")


def w2_family(g: Graph | None = None) -> list:
    """All 64 sign choices of the second witness form."""
    return [w2_witness(g, t, m) for t in range(16) for m in range(4)]


def w1_family(g: Graph | None = None) -> list:
    return [w1_witness(g, t) for t in range(16)]


def _labels_matching(n: int, fixed: dict) -> list:
    """Labels whose signs on the given qubits (1-based -> '+'/'-') match."""
    out = []
    for k in range(1 << n):
        if all(((k >> (q - 1)) & 1) == (1 if s == "-" else 0) for q, s in fixed.items()):
            out.append(k)
    return out


def y5_witness() -> DiagonalWitness:
    """``1/2 - |Y5><Y5| - 1/16 [(1-g1)(1-g4)(1+g5) + (1-g1)(1+g4)(1-g5) + (1-g1)(1-g4)(1-g5)]``."""
    g = builtin_graph("Y5")
    c = _half_minus(g, 0)
    for s4, s5 in (("-", "+"), ("+", "-"), ("-", "-")):
        # (1 +- g1)(1 +- g4)(1 +- g5) = 8 * projector onto the matching labels
        for k in _labels_matching(5, {1: "-", 4: s4, 5: s5}):
            c[k] -= HALF
    return DiagonalWitness(g, tuple(c), name="W_Y5")


def c5_witness() -> DiagonalWitness:
    """``1/2 - |C5><C5| - 1/32 [4(1-g1)(1-g5) + (1+g1)(1-g2)(1-g5) + (1-g1)(1-g4)(1+g5)]``."""
    g = builtin_graph("C5")
    c = _half_minus(g, 0)
    quarter = Fraction(1, 4)
    for k in _labels_matching(5, {1: "-", 5: "-"}):
        c[k] -= HALF
    for k in _labels_matching(5, {1: "+", 2: "-", 5: "-"}):
        c[k] -= quarter
    for k in _labels_matching(5, {1: "-", 4: "-", 5: "+"}):
        c[k] -= quarter
    return DiagonalWitness(g, tuple(c), name="W_C5")


def rotations(label: int, n: int) -> list:
    """The ``n`` cyclic translations of a label (with repetitions)."""
    out = []
    for shift in range(n):
        r = 0
        for i in range(n):
            if (label >> i) & 1:
                r |= 1 << ((i + shift) % n)
        out.append(r)
    return out


def translation_sum(n: int, label) -> list:
    """Coefficient vector of the sum over all translations of ``|label><label|``."""
    k = _label(label, n)
    c = [Fraction(0)] * (1 << n)
    for r in rotations(k, n):
        c[r] += 1
    return c


R5_TRACE_NATIVE = Fraction(7, 4)  # Tr(W I/32) for the native form


def r5_witness(rescaled: bool = False) -> DiagonalWitness:
    """Ring witness in its native form (no identity term), or rescaled so that ``Tr(W I/32) = 1``.

    Only the sign of ``Tr(W rho)`` matters; the native form has
    ``Tr(W I/32) = 7/4``.
    """
    g = builtin_graph("R5")
    c = [Fraction(0)] * 32
    for lab, mult in (("++++-", 3), ("++-+-", 3), ("++---", 3),
                      ("+++--", 1), ("+-+--", 1), ("+----", 1)):
        for k, v in enumerate(translation_sum(5, lab)):
            c[k] += mult * v
    c[label_from_string("-----")] -= 1
    c[0] -= 3
    w = DiagonalWitness(g, tuple(c), name="W_R5", note="native normalization, Tr(W I/32) = 7/4")
    if rescaled:
        w = w.scaled(1 / R5_TRACE_NATIVE)
        w = DiagonalWitness(g, w.coeffs, name="W_R5", note="rescaled by 4/7, Tr(W I/32) = 1")
    return w


def ghz_witness(g: Graph | None = None, peak=0, n: int | None = None) -> DiagonalWitness:
    """``1/2 - |t><t|`` on a star graph."""
    if g is None:
        g = star_graph(n or 3)
    if g != star_graph(g.n):
        raise ValueError("ghz_witness is defined on star graphs")
    t = _label(peak, g.n)
    return DiagonalWitness(g, tuple(_half_minus(g, t)), name=f"W_GHZ[{label_to_string(t, g.n)}]")


def fidelity_witness(g: Graph, peak=0) -> DiagonalWitness:
    """``1/2 - |t><t|``; valid on every graph with at least two qubits."""
    t = _label(peak, g.n)
    return DiagonalWitness(g, tuple(_half_minus(g, t)), name=f"W_F[{label_to_string(t, g.n)}]")


NAMED = {
    "W1": w1_witness,
    "W2": w2_witness,
    "Y5": y5_witness,
    "C5": c5_witness,
    "R5": r5_witness,
    "R5-rescaled": lambda: r5_witness(rescaled=True),
    "GHZ3": lambda: ghz_witness(n=3),
    "GHZ4": lambda: ghz_witness(n=4),
}


def named_witness(name: str) -> DiagonalWitness:
    if name not in NAMED:
        raise ValueError(f"unknown witness {name!r}; choose from {sorted(NAMED)}")
    return NAMED[name]()


# --------------------------------------------------------------------------
# validation


@dataclass
class WitnessReport:
    valid: bool
    kind: str
    violations: list = field(default_factory=list)  # (partition label, basis label, value)
    max_dense_deviation: float | None = None
    dense_min_eigenvalue: float | None = None

    def __bool__(self):
        return self.valid


def validate_witness(w: DiagonalWitness, dense: bool = False, kind: str | None = None) -> WitnessReport:
    """Exact validity check over all bipartitions (see module docstring).

    ``kind`` forces one notion; by default the strict test runs first and
    the decomposable one is tried only if it fails. With ``dense=True``
    (n <= 6) the transfer-matrix image is compared with the graph-basis
    diagonal of the dense partial transpose and the smallest dense
    eigenvalue of ``W^{T_M}`` over all ``M`` is reported.
    """
    from . import pptmix

    g = w.graph
    parts = all_bipartitions(g.n) if g.n > 1 else []
    strict_violations = []
    if kind in (None, "strict"):
        for m in parts:
            image = pptmix.transfer_matrix(g, m).apply(w.coeffs)
            for j, v in enumerate(image):
                if v < 0:
                    strict_violations.append((m.label(), label_to_string(j, g.n), v))
        report = WitnessReport(not strict_violations, "strict", strict_violations)
    if kind == "decomposable" or (kind is None and strict_violations):
        check = w.parts or tuple(parts)
        violations = [(m.label(), None, None) for m in check if not pptmix.in_dual_cone(g, m, w.coeffs)]
        report = WitnessReport(not violations, "decomposable", violations)
    if dense:
        _dense_crosscheck(w, report)
    return report


def _dense_crosscheck(w: DiagonalWitness, report: WitnessReport):
    from . import dense as D
    from . import pptmix

    g = w.graph
    op = D.diagonal_operator(g, w.coeffs)
    worst = 0.0
    lowest = None
    for m in all_bipartitions(g.n):
        pt = D.partial_transpose(op, m)
        view = D.graph_basis_view(pt, g)
        image = pptmix.transfer_matrix(g, m).apply(w.coeffs)
        import numpy as np

        diag = np.real(np.diag(view))
        off = view - np.diag(np.diag(view))
        worst = max(worst, float(np.max(np.abs(off), initial=0.0)),
                    max(abs(float(a) - b) for a, b in zip(image, diag)))
        ev = D.min_eigenvalue(pt)
        lowest = ev if lowest is None else min(lowest, ev)
    report.max_dense_deviation = worst
    report.dense_min_eigenvalue = lowest
    if report.kind == "strict" and lowest < -1e-10 and report.valid:
        # exact and dense checks disagree
        report.valid = False
        report.violations.append(("dense", None, lowest))
