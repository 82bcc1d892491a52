"""Decision procedures and constructive biseparable decompositions.

* four-qubit cluster-diagonal states: the two families of linear
  conditions (peak weight against neighbouring blocks, and weight of an
  inseparable pair against one half) and the constructive proof
  (Cases 1 to 4) producing a certified decomposition;
* GHZ-diagonal states: a single fidelity condition;
* five-qubit white-noise lines (Y5, C5, R5) with the explicit
  decompositions at the threshold;
* the six-qubit linear cluster bounds;
* a dispatcher that normalizes the input graph by local complementation
  and relabelling, and falls back to the PPT-mixture LP elsewhere.

Labels of the four-qubit cluster are written ``a b c d``; a *block*
``(a, d)`` collects the four labels with first sign ``a`` and last sign
``d``. Two labels form a separable pair unless they differ in both end
signs.
"""

from __future__ import annotations

import itertools
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import pptmix
from .certificates import Biseparable, Decomposition, Gme, Inconclusive, Term, make_term
from .graphs import (Bipartition, Graph, all_bipartitions, builtin_graph, cut_rank,
                     label_transform_lc, local_complement, star_graph, y_graph)
from .lp import scale_to_integers, solve_feasibility
from .states import (GraphDiagonalState, label_from_string, label_to_string, permute_labels,
                     to_fraction, white_noise)
from .witnesses import (DiagonalWitness, c5_witness, ghz_witness, r5_witness, rotations, w1_witness,
                        w2_witness, y5_witness)

log = logging.getLogger(__name__)

END = 0b1001  # first and last qubit of the four-qubit cluster
DEFAULT_MAX_QUBITS = 6


class PreconditionError(ValueError):
    """The input violates the precondition of a decomposition routine."""


def max_qubits() -> int:
    raw = os.environ.get("GRAPHSEP_MAX_QUBITS", "")
    try:
        cap = int(raw) if raw else DEFAULT_MAX_QUBITS
    except ValueError:
        raise ValueError(f"GRAPHSEP_MAX_QUBITS must be an integer, got {raw!r}") from None
    return min(cap, pptmix.LP_MAX_QUBITS)


def _c4() -> Graph:
    return builtin_graph("C4")


# --------------------------------------------------------------------------
# separable pairs


@lru_cache(maxsize=None)
def pair_partition(g: Graph, d: int, one_bp_only: bool = False):
    """First bipartition certifying the equal mixture of labels ``k`` and ``k ^ d``.

    One-Bell-pair partitions are tried first (PPT suffices there), then
    the others (rank two never exceeds the reduced ranks). Returns ``None``
    when the pair is PPT across no bipartition.
    """
    if d == 0:
        raise ValueError("a pair needs two distinct labels")
    x = [Fraction(0)] * (1 << g.n)
    x[0] = x[d] = Fraction(1, 2)
    parts = all_bipartitions(g.n)
    ordered = [m for m in parts if cut_rank(g, m) <= 1]
    if not one_bp_only:
        ordered += [m for m in parts if cut_rank(g, m) > 1]
    for m in ordered:
        if all(v >= 0 for v in pptmix.transfer_matrix(g, m).apply(x)):
            return m
    return None


def lemma2_separable_pair(k1: int, k2: int):
    """Certifying partition for the equal mixture of two C4 labels, or ``None``.

    ``None`` exactly when the labels differ in both the first and the last
    sign.
    """
    if isinstance(k1, str):
        k1 = label_from_string(k1)
    if isinstance(k2, str):
        k2 = label_from_string(k2)
    if not (0 <= k1 < 16 and 0 <= k2 < 16) or k1 == k2:
        raise ValueError("need two distinct four-qubit labels")
    d = k1 ^ k2
    if d & END == END:
        return None
    m = pair_partition(_c4(), d, one_bp_only=True)
    if m is None:  # pragma: no cover - excluded by the test suite
        raise AssertionError(f"no 1BP partition certifies the pair {k1}, {k2}")
    return m


def separable_pair(g: Graph, k1: int, k2: int):
    """Generic version of :func:`lemma2_separable_pair` for any graph."""
    return pair_partition(g, k1 ^ k2)


def pair_term(g: Graph, k1: int, k2: int, amount) -> Term:
    """``amount`` of weight on each of the two labels, as one certified term."""
    m = separable_pair(g, k1, k2)
    if m is None:
        raise PreconditionError(f"labels {label_to_string(k1, g.n)}, {label_to_string(k2, g.n)} "
                                "form no separable pair")
    x = [Fraction(0)] * (1 << g.n)
    x[k1] = x[k2] = to_fraction(amount)
    return make_term(g, x, "PairLemma2", m)


# --------------------------------------------------------------------------
# four-qubit cluster: conditions


def block_of(k: int) -> tuple:
    return (k & 1, (k >> 3) & 1)


def block_labels(a: int, d: int) -> list:
    return [k for k in range(16) if block_of(k) == (a, d)]


def _block_sums(F) -> dict:
    sums = {(a, d): 0 for a in (0, 1) for d in (0, 1)}
    for k, v in enumerate(F):
        sums[block_of(k)] += v
    return sums


@dataclass(frozen=True)
class Condition:
    kind: int  # 13: peak weight vs neighbouring blocks; 14: inseparable pair vs half
    t: int
    t2: int | None
    slack: Fraction

    def coefficient(self, k: int) -> int:
        """Derivative of the slack with respect to the weight of label ``k``."""
        if self.kind == 13:
            a, d = block_of(self.t)
            inside = block_of(k) != (1 - a, 1 - d)
            return int(inside) - 2 * (k == self.t)
        return 1 - 2 * (k == self.t) - 2 * (k == self.t2)

    def describe(self) -> str:
        if self.kind == 13:
            return f"peak condition at {label_to_string(self.t, 4)}"
        return f"pair condition at {label_to_string(self.t, 4)}, {label_to_string(self.t2, 4)}"


def theorem3_conditions(weights) -> list:
    """All 16 peak conditions followed by all 64 pair conditions, with slacks."""
    F = [v if isinstance(v, int) else to_fraction(v) for v in weights]
    if len(F) != 16:
        raise ValueError("need 16 weights")
    S = _block_sums(F)
    total = sum(F)
    out = []
    for t in range(16):
        a, d = block_of(t)
        rhs = S[(a, d)] + S[(1 - a, d)] + S[(a, 1 - d)]
        out.append(Condition(13, t, None, rhs - 2 * F[t]))
    for t in range(16):
        a, d = block_of(t)
        for t2 in block_labels(1 - a, 1 - d):
            out.append(Condition(14, t, t2, total - 2 * F[t] - 2 * F[t2]))
    return out


def condition_witness(c: Condition, g: Graph | None = None) -> DiagonalWitness:
    """The closed-form witness whose expectation is half the condition's slack."""
    if c.kind == 13:
        return w1_witness(g, c.t)
    return w2_witness(g, c.t, (c.t2 >> 1) & 3)


# --------------------------------------------------------------------------
# four-qubit cluster: constructive decomposition


def _bell_term(g: Graph, F, block) -> Term | None:
    x = [Fraction(0)] * 16
    for k in block:
        x[k] = F[k]
    if not any(x):
        return None
    return make_term(g, x, "BellMixture", Bipartition.parse(4, "AB|CD"))


def _close_peak(g: Graph, F, t: int) -> list:
    a, d = block_of(t)
    terms = []
    bell = _bell_term(g, F, block_labels(1 - a, 1 - d))
    if bell is not None:
        terms.append(bell)
    for k in range(16):
        if k != t and F[k] and block_of(k) != (1 - a, 1 - d):
            terms.append(pair_term(g, t, k, F[k]))
    return terms


def _close_pair(g: Graph, F, t: int, t2: int) -> list:
    a, d = block_of(t)
    own, opp = block_labels(a, d), block_labels(1 - a, 1 - d)
    terms = []
    rest = {}
    for peak, block in ((t, own), (t2, opp)):
        others = sum(F[k] for k in block if k != peak)
        sigma = list(F)
        sigma[peak] = others
        bell = _bell_term(g, sigma, block)
        if bell is not None:
            terms.append(bell)
        rest[peak] = F[peak] - others
    if rest[t] < 0 or rest[t2] < 0:
        raise PreconditionError("pair condition tight but a peak condition fails")
    budget = rest[t]
    for k in range(16):
        if block_of(k) in ((a, d), (1 - a, 1 - d)) or not F[k]:
            continue
        take = min(budget, F[k])
        if take:
            terms.append(pair_term(g, t, k, take))
            budget -= take
        if F[k] - take:
            terms.append(pair_term(g, t2, k, F[k] - take))
    return terms


def decompose_c4(s: GraphDiagonalState) -> Decomposition:
    """Biseparable decomposition of a C4-diagonal state satisfying all conditions.

    Separable pairs are subtracted in ascending label order, each by the
    largest amount that keeps every weight nonnegative and every condition
    satisfied, until a condition becomes tight; the tight condition is then
    closed by :func:`_close_peak` (peak condition) or :func:`_close_pair`
    (pair condition).

    Weights are kept as integers over a common denominator ``scale``; the
    denominator doubles whenever a step size is a half-integer.
    """
    g = _c4()
    if s.graph != g:
        raise ValueError("decompose_c4 expects a state on the C4 graph")
    F, scale = scale_to_integers(s.weights)
    terms = []
    pairs = [(k1, k2) for k1 in range(16) for k2 in range(k1 + 1, 16) if (k1 ^ k2) & END != END]
    while any(F):
        conds = theorem3_conditions(F)
        bad = [c for c in conds if c.slack < 0]
        if bad:
            raise PreconditionError(f"{bad[0].describe()} is violated")
        tight = [c for c in conds if c.slack == 0]
        if tight:
            c = min(tight, key=lambda c: (c.kind, c.t, c.t2 or 0))
            weights = [Fraction(v, scale) for v in F]
            if c.kind == 13:
                terms += _close_peak(g, weights, c.t)
            else:
                terms += _close_pair(g, weights, c.t, c.t2)
            break
        k1, k2 = next(((k1, k2) for k1, k2 in pairs if F[k1] and F[k2]), (None, None))
        if k1 is None:  # pragma: no cover - a lone label always makes a condition tight
            raise PreconditionError("no separable pair left to subtract")
        eps = Fraction(min(F[k1], F[k2]))
        for c in conds:
            gain = c.coefficient(k1) + c.coefficient(k2)
            if gain > 0:
                eps = min(eps, Fraction(c.slack, gain))
        if eps.denominator != 1:
            F = [v * eps.denominator for v in F]
            scale *= eps.denominator
            eps *= eps.denominator
        eps = int(eps)
        terms.append(pair_term(g, k1, k2, Fraction(eps, scale)))
        F[k1] -= eps
        F[k2] -= eps
    return Decomposition(s, tuple(terms))


def theorem3_check(s: GraphDiagonalState):
    """Exact biseparability decision for states diagonal in a C4-equivalent basis."""
    gmap = find_graph_map(s.graph, _c4())
    if gmap is None:
        raise ValueError("graph is not equivalent to the four-qubit cluster")
    t = gmap.forward_state(s)
    conds = theorem3_conditions(scale_to_integers(t.weights)[0])
    bad = [c for c in conds if c.slack < 0]
    if bad:
        c = min(bad, key=lambda c: c.slack)
        w = gmap.backward_witness(condition_witness(c))
        return Gme(w, w.evaluate(s))
    d = decompose_c4(t)
    return Biseparable(gmap.backward_decomposition(d, s))


# --------------------------------------------------------------------------
# GHZ-diagonal states


def circular_pairs(weights) -> list:
    """Split a distribution with no weight above one half into pairs.

    Labels are laid out in order on a circle of circumference ``total``;
    the point ``x`` is matched with ``x + total / 2``. Returns
    ``[(k1, k2, amount), ...]`` with ``amount`` on each label.
    """
    w = [to_fraction(v) for v in weights]
    total = sum(w)
    half = total / 2
    if any(v > half for v in w):
        raise PreconditionError("a weight exceeds half of the total")
    starts = []
    pos = Fraction(0)
    for k, v in enumerate(w):
        if v:
            starts.append((pos, k))
            pos += v

    def owner(x):
        found = None
        for p, k in starts:
            if p <= x:
                found = k
        return found

    cuts = {Fraction(0), half}
    for p, _ in starts:
        cuts.add(p if p < half else p - half)
    cuts = sorted(c for c in cuts if c <= half)
    out = {}
    for lo, hi in zip(cuts, cuts[1:]):
        if hi == lo:
            continue
        k1, k2 = owner(lo), owner(lo + half)
        key = (min(k1, k2), max(k1, k2))
        out[key] = out.get(key, Fraction(0)) + (hi - lo)
    return [(k1, k2, amt) for (k1, k2), amt in sorted(out.items())]


def ghz_diagonal_check(s: GraphDiagonalState):
    """GME iff the largest weight exceeds one half (GHZ-equivalent graphs)."""
    target = star_graph(s.n)
    gmap = find_graph_map(s.graph, target)
    if gmap is None:
        raise ValueError("graph is not equivalent to a star graph")
    t = gmap.forward_state(s)
    peak = max(range(len(t.weights)), key=lambda k: (t.weights[k], -k))
    if t.weights[peak] > Fraction(1, 2):
        w = gmap.backward_witness(ghz_witness(target, peak))
        return Gme(w, w.evaluate(s))
    terms = []
    for k1, k2, amt in circular_pairs(t.weights):
        m = separable_pair(target, k1, k2)
        x = [Fraction(0)] * (1 << s.n)
        x[k1] = x[k2] = amt
        terms.append(make_term(target, x, "GhzMixture", m))
    return Biseparable(gmap.backward_decomposition(Decomposition(t, tuple(terms)), s))


# --------------------------------------------------------------------------
# explicit five-qubit decompositions


THRESHOLDS = {
    "C4": Fraction(5, 13),
    "Y5": Fraction(9, 25),
    "C5": Fraction(9, 25),
    "R5": Fraction(7, 19),
}
C6_LOWER = Fraction(11, 43)
C6_UPPER = Fraction(51, 179)

WHITE_NOISE_WITNESS = {"Y5": y5_witness, "C5": c5_witness, "R5": r5_witness}


def _labels(n: int, pattern: str) -> list:
    """Labels matching a pattern of ``+``, ``-`` and ``.`` (any sign)."""
    out = []
    for k in range(1 << n):
        s = label_to_string(k, n)
        if all(p == "." or p == c for p, c in zip(pattern, s)):
            out.append(k)
    return out


def _vec(n: int, mapping) -> list:
    x = [Fraction(0)] * (1 << n)
    for k, v in mapping.items():
        x[label_from_string(k) if isinstance(k, str) else k] += to_fraction(v)
    return x


def match_pairs(g: Graph, labels, amount) -> list:
    """Perfect matching of ``labels`` into separable pairs (first found, in order)."""
    labels = sorted(labels)

    def search(rest):
        if not rest:
            return []
        first = rest[0]
        for other in rest[1:]:
            if separable_pair(g, first, other) is not None:
                tail = search([k for k in rest[1:] if k != other])
                if tail is not None:
                    return [(first, other)] + tail
        return None

    found = search(labels)
    if found is None:
        raise PreconditionError("labels admit no matching into separable pairs")
    return [pair_term(g, a, b, amount) for a, b in found]


def _y5_excluded() -> list:
    return sorted(set(_labels(5, "-..-+") + _labels(5, "-..+-") + _labels(5, "-..--")))


def _c5_excluded() -> list:
    return sorted(set(_labels(5, "-..-+") + _labels(5, "+-..-") + _labels(5, "-...-")))


def _pairs_with_peak(g: Graph, excluded, amount) -> list:
    return [pair_term(g, 0, k, amount) for k in range(1, 1 << g.n) if k not in excluded]


C5_ETAS = (
    (("+++++", "+-++-", "-++-+", "--+--"), "SmolinBased", "AE|BCD"),
    (("+++++", "+-+--", "--+-+", "-+++-"), "SmolinBased", "AE|BCD"),
    (("+++++", "+--+-", "----+", "-++--"), "PptRank4", "BD|ACE"),
    (("+++++", "+----", "-+--+", "--++-"), "PptRank4", "BD|ACE"),
)

R5_ETAS = (
    (("+++++", "+--++", "--+-+", "-+--+"), "SmolinBased", "BC|ADE"),
    (("+++++", "--+++", "++--+", "----+"), "PptRank4", "BC|ADE"),
    (("+++++", "--+++", "-+---", "+----"), "PptRank4", "CE|ABD"),
    (("+++++", "--+-+", "+--+-", "-+---"), "PptRank4", "AC|BDE"),
)


def _eta_term(g: Graph, labels, tag: str, part: Bipartition, amount) -> Term:
    x = [Fraction(0)] * (1 << g.n)
    for k in labels:
        x[k if isinstance(k, int) else label_from_string(k)] += to_fraction(amount)
    return make_term(g, x, tag, part)


def c5_remainder_terms(amount=1) -> list:
    """Separable decomposition of ``4|+++++> + sum`` over the 16 excluded C5 labels."""
    g = builtin_graph("C5")
    terms = [_eta_term(g, labs, tag, Bipartition.parse(5, part), amount) for labs, tag, part in C5_ETAS]
    used = {label_from_string(k) for labs, _, _ in C5_ETAS for k in labs[1:]}
    left = [k for k in _c5_excluded() if k not in used]
    return terms + match_pairs(g, left, amount)


def y5_threshold_terms() -> list:
    """``19|+++++> + sum_{k != 0} |k>`` as separable terms (unnormalized)."""
    g = builtin_graph("Y5")
    excluded = _y5_excluded()
    return _pairs_with_peak(g, excluded, 1) + match_pairs(g, excluded, 1)


def c5_threshold_terms() -> list:
    g = builtin_graph("C5")
    return _pairs_with_peak(g, _c5_excluded(), 1) + c5_remainder_terms()


def _rotate_mask(mask: int, n: int, shift: int) -> int:
    return rotations(mask, n)[shift % n]


def r5_threshold_terms() -> list:
    """``59|+++++> + 3 sum_{k != 0} |k>`` as separable terms (unnormalized).

    Three times the translated pairs with ``++++-``, ``++-+-``, ``++---``,
    then the translated eta states, and finally pairs of ``-----`` with the
    labels left over. The eta coefficient is recomputed from the balance
    at ``+++++``.
    """
    g = builtin_graph("R5")
    n = 5
    terms = []
    peak_used = Fraction(0)
    for x in ("++++-", "++-+-", "++---"):
        for r in rotations(label_from_string(x), n):
            terms.append(pair_term(g, 0, r, 3))
            peak_used += 3
    eta_coeff = (59 - peak_used) / (len(R5_ETAS) * n)
    for labs, tag, part in R5_ETAS:
        base = Bipartition.parse(n, part)
        for shift in range(n):
            moved = [_rotate_mask(label_from_string(k), n, shift) for k in labs]
            terms.append(_eta_term(g, moved, tag, Bipartition(n, _rotate_mask(base.mask, n, shift)),
                                   eta_coeff))
    acc = [Fraction(0)] * 32
    for t in terms:
        for k, v in enumerate(t.component.weights):
            acc[k] += t.weight * v
    target = [Fraction(59)] + [Fraction(3)] * 31
    rest = [a - b for a, b in zip(target, acc)]
    if any(v < 0 for v in rest):
        raise AssertionError("translated terms overshoot the state")
    top = label_from_string("-----")
    for k, v in enumerate(rest):
        if v and k != top:
            terms.append(pair_term(g, top, k, v))
            rest[top] -= v
            rest[k] = 0
    if any(rest):
        raise AssertionError("leftover weight after the final pairs")
    return terms


_THRESHOLD_TERMS = {"Y5": y5_threshold_terms, "C5": c5_threshold_terms, "R5": r5_threshold_terms}


def scale_terms(terms, factor) -> list:
    factor = to_fraction(factor)
    if not factor:
        return []
    return [Term(t.weight * factor, t.component, t.tag, t.partition, t.note) for t in terms]


def uniform_terms(g: Graph, mass) -> list:
    """``mass`` spread uniformly over all labels, as a perfect matching of pairs."""
    mass = to_fraction(mass)
    if not mass:
        return []
    dim = 1 << g.n
    d = next(d for d in range(1, dim) if separable_pair(g, 0, d) is not None)
    amount = mass / dim
    return [pair_term(g, k, k ^ d, amount) for k in range(dim) if k < k ^ d]


def white_noise_decomposition(name: str, p) -> Decomposition:
    """Decomposition of ``white_noise(name, p)`` for ``p`` at most the threshold."""
    p = to_fraction(p)
    g = builtin_graph(name)
    if name == "C6":
        threshold, terms = C6_LOWER, c6_threshold_terms()
    else:
        threshold, terms = THRESHOLDS[name], _THRESHOLD_TERMS[name]()
    if p > threshold:
        raise PreconditionError(f"p = {p} lies above the separable region (<= {threshold})")
    total = sum(t.weight for t in terms)
    scaled = scale_terms(terms, (p / threshold) / total)
    return Decomposition(white_noise(g, p), tuple(scaled + uniform_terms(g, 1 - p / threshold)))


def classify_white_noise(name: str, p):
    """Exact verdict on the white-noise line of Y5, C5 or R5."""
    if name not in WHITE_NOISE_WITNESS:
        raise ValueError("white-noise propositions cover Y5, C5 and R5")
    p = to_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"mixing parameter {p} outside [0, 1]")
    s = white_noise(builtin_graph(name), p)
    threshold = THRESHOLDS[name]
    if p > threshold:
        w = WHITE_NOISE_WITNESS[name]()
        return Gme(w, w.evaluate(s), threshold=threshold)
    return Biseparable(white_noise_decomposition(name, p), threshold=threshold)


def smolin_state() -> GraphDiagonalState:
    """Equal mixture of the four products of equal Bell states on edges 1-2, 3-4."""
    g = Graph.from_edges(4, [(1, 2), (3, 4)])
    labels = [a | (b << 1) | (a << 2) | (b << 3) for a in (0, 1) for b in (0, 1)]
    w = [Fraction(0)] * 16
    for k in labels:
        w[k] = Fraction(1, 4)
    return GraphDiagonalState(g, tuple(w))


# --------------------------------------------------------------------------
# six-qubit linear cluster


def c6_excluded() -> list:
    patterns = ("-..-++", "-...-+", "-....-", "++-..-", "+-...-", "+-..-+")
    return sorted(set(k for p in patterns for k in _labels(6, p)))


def _embed(term: Term, n: int, offset: int, pad_with: int) -> Term:
    """Lift a five-qubit term to six qubits (``offset`` 0: add qubit 6; 1: add qubit 1)."""
    g6 = builtin_graph("C6")
    x = [Fraction(0)] * (1 << n)
    for k, v in enumerate(term.component.weights):
        if v:
            x[k << offset] = v
    inside, _ = term.partition.sides
    qubits = [q + offset for q in inside]
    if (pad_with + offset) in qubits:  # the added qubit joins its neighbour's side
        qubits.append(6 if offset == 0 else 1)
    part = Bipartition.from_qubits(n, qubits)
    comp = make_term(g6, x, term.tag, part, note="embedded five-qubit component")
    return Term(term.weight, comp.component, comp.tag, comp.partition, comp.note)


def c6_threshold_terms() -> list:
    """``23|++++++> + sum_{k != 0} |k>`` as separable terms (unnormalized).

    Pairs with the peak, two embedded copies of the five-qubit remainder
    (on qubits 1-5 and on qubits 2-6, each with weight one half), then an
    exact pair LP for what is left.
    """
    g = builtin_graph("C6")
    excluded = c6_excluded()
    terms = _pairs_with_peak(g, excluded, 1)
    half = Fraction(1, 2)
    for offset, pad_with in ((0, 5), (1, 1)):
        for t in c5_remainder_terms(half):
            terms.append(_embed(t, 6, offset, pad_with))
    acc = [Fraction(0)] * 64
    for t in terms:
        for k, v in enumerate(t.component.weights):
            acc[k] += t.weight * v
    target = [Fraction(23)] + [Fraction(1)] * 63
    rest = [a - b for a, b in zip(target, acc)]
    if any(v < 0 for v in rest):
        raise AssertionError("embedded terms overshoot the state")
    return terms + pair_cover(g, rest)


def pair_cover(g: Graph, weights) -> list:
    """Exact cover of a weight vector by separable pairs (feasibility LP)."""
    support = [k for k, v in enumerate(weights) if v]
    if not support:
        return []
    row = {k: i for i, k in enumerate(support)}
    pairs = [(a, b) for a, b in itertools.combinations(support, 2) if separable_pair(g, a, b) is not None]
    columns = [{row[a]: 1, row[b]: 1} for a, b in pairs]
    res = solve_feasibility(columns, [weights[k] for k in support], len(support))
    if not res.feasible:
        raise PreconditionError("weights cannot be covered by separable pairs")
    return [pair_term(g, *pairs[j], v) for j, v in sorted(res.solution.items())]


def c6_bounds():
    """``(11/43, 51/179, decomposition at 11/43)``."""
    return C6_LOWER, C6_UPPER, white_noise_decomposition("C6", C6_LOWER)


# --------------------------------------------------------------------------
# graph normalization


@dataclass(frozen=True)
class GraphMap:
    """Local complementations, then a relabelling, then Z sign flips.

    ``steps`` holds ``(graph before, vertex)`` pairs; ``perm[i-1]`` is the
    new name of qubit ``i``; ``flip`` is XORed onto every label last.
    """

    src: Graph
    dst: Graph
    steps: tuple
    perm: tuple
    flip: int = 0

    def with_flip(self, flip: int) -> "GraphMap":
        return GraphMap(self.src, self.dst, self.steps, self.perm, flip)

    def forward_vector(self, vec) -> tuple:
        vec = list(vec)
        for h, a in self.steps:
            out = [0] * len(vec)
            for k, v in enumerate(vec):
                out[label_transform_lc(h, a, k)] = v
            vec = out
        vec = list(permute_labels(vec, self.src.n, self.perm))
        return tuple(vec[k ^ self.flip] for k in range(len(vec)))

    def backward_vector(self, vec) -> tuple:
        vec = [vec[k ^ self.flip] for k in range(len(vec))]
        inv = [0] * len(self.perm)
        for i, p in enumerate(self.perm):
            inv[p - 1] = i + 1
        vec = list(permute_labels(vec, self.src.n, inv))
        for h, a in reversed(self.steps):
            after = local_complement(h, a)
            out = [0] * len(vec)
            for k, v in enumerate(vec):
                out[label_transform_lc(after, a, k)] = v
            vec = out
        return tuple(vec)

    def backward_partition(self, m: Bipartition) -> Bipartition:
        inv = {p: i + 1 for i, p in enumerate(self.perm)}
        inside, _ = m.sides
        return Bipartition.from_qubits(m.n, [inv[q] for q in inside])

    def forward_state(self, s: GraphDiagonalState) -> GraphDiagonalState:
        return GraphDiagonalState(self.dst, self.forward_vector(s.weights), s.exact, s.normalized)

    def backward_witness(self, w: DiagonalWitness) -> DiagonalWitness:
        if self.is_identity:
            return w
        return DiagonalWitness(self.src, self.backward_vector(w.coeffs), w.name, w.kind,
                               tuple(self.backward_partition(m) for m in w.parts),
                               (w.note + "; " if w.note else "") + "mapped from the canonical graph")

    def backward_decomposition(self, d: Decomposition, s: GraphDiagonalState) -> Decomposition:
        if self.is_identity:
            return Decomposition(s, d.terms)
        terms = []
        for t in d.terms:
            comp = GraphDiagonalState(self.src, self.backward_vector(t.component.weights))
            terms.append(Term(t.weight, comp, t.tag, self.backward_partition(t.partition), t.note))
        return Decomposition(s, tuple(terms))

    @property
    def is_identity(self) -> bool:
        return not self.steps and self.flip == 0 and list(self.perm) == list(range(1, self.src.n + 1))


def _degree_key(g: Graph) -> tuple:
    return tuple(sorted(g.degree(i) for i in range(1, g.n + 1)))


@lru_cache(maxsize=256)
def find_graph_map(src: Graph, dst: Graph):
    """Local complementations and relabelling turning ``src`` into ``dst``, or ``None``."""
    if src.n != dst.n:
        return None
    identity = tuple(range(1, src.n + 1))
    if src == dst:
        return GraphMap(src, dst, (), identity)
    if len(src.edges) == 0 or len(dst.edges) == 0:
        return None
    parent = {src: None}
    queue = [src]
    target_key = _degree_key(dst)
    for h in queue:
        if _degree_key(h) == target_key:
            for perm in itertools.permutations(identity):
                if h.permuted(perm) == dst:
                    steps = []
                    cur = h
                    while parent[cur] is not None:
                        prev, a = parent[cur]
                        steps.append((prev, a))
                        cur = prev
                    return GraphMap(src, dst, tuple(steps[::-1]), tuple(perm))
        for a in range(1, h.n + 1):
            k = local_complement(h, a)
            if k not in parent:
                parent[k] = (h, a)
                queue.append(k)
    return None


# --------------------------------------------------------------------------
# dispatcher


def white_noise_peak(s: GraphDiagonalState):
    """``(p, peak)`` if ``s`` is a sign-flipped white-noise state, else ``None``."""
    w = s.weights
    dim = len(w)
    if not s.exact:
        return None
    low = min(w)
    peaks = [k for k, v in enumerate(w) if v != low]
    if len(peaks) > 1:
        return None
    peak = peaks[0] if peaks else 0
    p = w[peak] - low
    if p + dim * low != 1:
        return None
    return p, peak


def _lp_verdict(s: GraphDiagonalState, restrict_1bp: bool = False):
    g = s.graph
    if not restrict_1bp:
        cert = pptmix.is_ppt_mixture(s)
        if not cert.feasible:
            w = pptmix.dual_witness(cert, s)
            return Gme(w, w.evaluate(s))
    cert = pptmix.is_ppt_mixture(s, "1bp")
    if cert.feasible:
        from .certificates import component_from_ppt

        terms = tuple(component_from_ppt(g, m, x) for m, x in cert.components.items())
        return Biseparable(Decomposition(s, terms))
    if restrict_1bp:
        return Inconclusive("not a mixture of states PPT across one-Bell-pair cuts; "
                            "GME not decided without the full LP")
    return Inconclusive("PPT mixture; biseparability not implied", certificate=cert)


def _disconnected(s: GraphDiagonalState):
    g = s.graph
    comp = 1
    frontier = [0]
    while frontier:
        v = frontier.pop()
        new = g.nbr[v] & ~comp
        comp |= new
        frontier.extend(i for i in range(g.n) if (new >> i) & 1)
    m = Bipartition(g.n, comp)
    return Biseparable(Decomposition(s, (Term(Fraction(1), s, "Explicit", m,
                                                  note="no edge crosses the cut"),)))


def classify(s: GraphDiagonalState, restrict_1bp: bool = False):
    """Verdict with a certificate for an exact graph-diagonal state."""
    g = s.graph
    if not s.exact:
        raise ValueError("classification needs exact weights")
    if g.n < 2:
        raise ValueError("biseparability needs at least two qubits")
    if g.n > max_qubits():
        raise ValueError(f"n = {g.n} exceeds the qubit cap {max_qubits()} (GRAPHSEP_MAX_QUBITS)")
    if not g.is_connected():
        return _disconnected(s)
    if find_graph_map(g, star_graph(g.n)) is not None:
        return ghz_diagonal_check(s)
    if g.n == 4:
        return theorem3_check(s)
    noise = white_noise_peak(s)
    for name in ("Y5", "C5", "R5", "C6"):
        if builtin_graph(name).n != g.n or noise is None:
            continue
        gmap = find_graph_map(g, builtin_graph(name))
        if gmap is None:
            continue
        p, peak = noise
        gmap = gmap.with_flip(gmap.forward_vector(_unit(g.n, peak)).index(1))
        return _map_verdict(_white_noise_verdict(name, p, restrict_1bp), gmap, s)
    yn = y_graph(g.n)
    gmap = find_graph_map(g, yn)
    if gmap is not None:
        return _map_verdict(pptmix.classify_yn(gmap.forward_state(s)), gmap, s)
    return _lp_verdict(s, restrict_1bp)


def _unit(n: int, k: int) -> list:
    x = [0] * (1 << n)
    x[k] = 1
    return x


def _white_noise_verdict(name: str, p, restrict_1bp: bool):
    if name in WHITE_NOISE_WITNESS:
        return classify_white_noise(name, p)
    s = white_noise(builtin_graph(name), p)
    if p <= C6_LOWER:
        return Biseparable(white_noise_decomposition(name, p), threshold=(C6_LOWER, C6_UPPER))
    v = _lp_verdict(s, restrict_1bp)
    return _with_threshold(v, (C6_LOWER, C6_UPPER))


def _with_threshold(v, threshold):
    if isinstance(v, Gme):
        return Gme(v.witness, v.value, threshold)
    if isinstance(v, Biseparable):
        return Biseparable(v.decomposition, threshold)
    return Inconclusive(v.reason, v.certificate, threshold)


def _map_verdict(v, gmap: GraphMap, s: GraphDiagonalState):
    if isinstance(v, Gme):
        w = gmap.backward_witness(v.witness)
        return Gme(w, w.evaluate(s), v.threshold)
    if isinstance(v, Biseparable):
        return Biseparable(gmap.backward_decomposition(v.decomposition, s), v.threshold)
    return v


# --------------------------------------------------------------------------
# thresholds


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in the closed interval ``[lo, hi]``."""
    if lo > hi:
        raise ValueError("empty interval")
    fl = lo.numerator // lo.denominator
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    inner = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / inner


def decide_biseparable(g: Graph, p) -> bool:
    """Biseparability of ``white_noise(g, p)`` from a procedure that does not use stored thresholds.

    C4 and GHZ graphs use their exact criteria; otherwise the answer is
    PPT-mixture feasibility (equal to biseparability for Y graphs, and an
    upper bound on the separable region elsewhere).
    """
    s = white_noise(g, p)
    if find_graph_map(g, star_graph(g.n)) is not None:
        return max(s.weights) <= Fraction(1, 2)
    if g == _c4():
        return all(c.slack >= 0 for c in theorem3_conditions(scale_to_integers(s.weights)[0]))
    return pptmix.is_ppt_mixture(s).feasible


def find_threshold(name: str, steps: int = 24):
    """Exact white-noise threshold by bisection plus the simplest rational in the final bracket.

    The candidate is checked on both sides: biseparable at the candidate,
    entangled just above it. For C6 the known bounds are returned.
    """
    if name == "C6":
        return (C6_LOWER, C6_UPPER)
    g = builtin_graph(name)
    lo, hi = Fraction(0), Fraction(1)
    if not decide_biseparable(g, lo) or decide_biseparable(g, hi):
        raise ValueError(f"no threshold inside (0, 1) for {name}")
    for _ in range(steps):
        mid = (lo + hi) / 2
        if decide_biseparable(g, mid):
            lo = mid
        else:
            hi = mid
    cand = simplest_between(lo, hi)
    if cand == hi or not decide_biseparable(g, cand):
        raise ArithmeticError("bisection bracket did not isolate a simple threshold")
    eps = Fraction(1, 10**9)
    if decide_biseparable(g, min(cand + eps, hi)):
        raise ArithmeticError("candidate threshold is not sharp")
    return cand


def sweep(name: str, points=None) -> list:
    """``[(p, verdict string), ...]`` using :func:`classify`."""
    g = builtin_graph(name)
    points = points or [Fraction(k, 10) for k in range(11)]
    return [(to_fraction(p), classify(white_noise(g, to_fraction(p))).verdict) for p in points]
