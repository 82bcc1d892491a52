"""Graph-basis labels and graph-diagonal states.

A basis label is an ``n``-bit integer; bit ``i - 1`` set means the state
has eigenvalue -1 for generator ``g_i``. Label 0 is the graph state.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph, bits, group_element, local_complement, popcount


def label_from_string(s: str) -> int:
    """``"+-++"`` -> 2. Qubit 1 is the leftmost character."""
    s = s.strip()
    if not s or set(s) - {"+", "-"}:
        raise ValueError(f"bad basis label {s!r}")
    return sum(1 << i for i, c in enumerate(s) if c == "-")


def label_to_string(label: int, n: int) -> str:
    return "".join("-" if (label >> i) & 1 else "+" for i in range(n))


def label_signs(label: int, n: int) -> tuple:
    return tuple(-1 if (label >> i) & 1 else 1 for i in range(n))


def character(label: int, subset: int) -> int:
    """Product of the signs of ``label`` over the generators in ``subset``."""
    return -1 if popcount(label & subset) & 1 else 1


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions, ``"p/q"`` strings and decimal strings exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, numbers.Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    raise TypeError(f"cannot convert {value!r} to an exact rational")


@dataclass(frozen=True)
class GraphDiagonalState:
    """Weights over the graph basis of ``graph``.

    ``exact`` states carry Fractions; otherwise floats (only produced by
    :func:`depolarize` on floating-point input). ``normalized=False``
    allows weight sums below one, as used for partial subtractions.
    """

    graph: Graph
    weights: tuple
    exact: bool = True
    normalized: bool = True

    def __post_init__(self):
        dim = 1 << self.graph.n
        if len(self.weights) != dim:
            raise ValueError(f"expected {dim} weights, got {len(self.weights)}")
        if self.exact:
            w = tuple(to_fraction(x) for x in self.weights)
            object.__setattr__(self, "weights", w)
            if any(x < 0 for x in w):
                raise ValueError("weights must be nonnegative")
            total = sum(w)
            if self.normalized and total != 1:
                raise ValueError(f"weights sum to {total}, not 1")
            if not self.normalized and total > 1:
                raise ValueError(f"unnormalized weights sum to {total} > 1")
        else:
            w = tuple(float(x) for x in self.weights)
            object.__setattr__(self, "weights", w)
            if any(x < -1e-9 for x in w):
                raise ValueError("weights must be nonnegative")
            if self.normalized and abs(sum(w) - 1) > 1e-9:
                raise ValueError(f"weights sum to {sum(w)}, not 1")

    @property
    def n(self) -> int:
        return self.graph.n

    @classmethod
    def from_labels(cls, graph: Graph, mapping: dict, normalized: bool = True) -> "GraphDiagonalState":
        """Build from ``{"+-++": "1/2", ...}``; missing labels get weight 0."""
        w = [Fraction(0)] * (1 << graph.n)
        for key, val in mapping.items():
            k = label_from_string(key) if isinstance(key, str) else int(key)
            if isinstance(key, str) and len(key.strip()) != graph.n:
                raise ValueError(f"label {key!r} has wrong length for n={graph.n}")
            w[k] += to_fraction(val)
        return cls(graph, tuple(w), normalized=normalized)

    @classmethod
    def point_mass(cls, graph: Graph, label: int = 0) -> "GraphDiagonalState":
        w = [Fraction(0)] * (1 << graph.n)
        w[label] = Fraction(1)
        return cls(graph, tuple(w))

    @classmethod
    def uniform(cls, graph: Graph) -> "GraphDiagonalState":
        dim = 1 << graph.n
        return cls(graph, (Fraction(1, dim),) * dim)

    def weight(self, label) -> Fraction:
        if isinstance(label, str):
            label = label_from_string(label)
        return self.weights[label]

    @property
    def total(self):
        return sum(self.weights)

    @property
    def support(self) -> tuple:
        return tuple(k for k, w in enumerate(self.weights) if w)

    @property
    def rank(self) -> int:
        return len(self.support)

    def normalized_copy(self) -> "GraphDiagonalState":
        t = self.total
        if t == 0:
            raise ValueError("cannot normalize the zero state")
        return GraphDiagonalState(self.graph, tuple(w / t for w in self.weights), self.exact)

    def as_dict(self) -> dict:
        return {label_to_string(k, self.n): w for k, w in enumerate(self.weights) if w}

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.as_dict().items())
        return f"GraphDiagonalState({self.graph!r}, {{{body}}})"


def white_noise(g: Graph, p) -> GraphDiagonalState:
    """``p |G><G| + (1 - p) I / 2^n``."""
    p = to_fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"mixing parameter {p} outside [0, 1]")
    dim = 1 << g.n
    noise = (1 - p) / dim
    w = [noise] * dim
    w[0] = p + noise
    return GraphDiagonalState(g, tuple(w))


def flip_signs(s: GraphDiagonalState, t: int) -> GraphDiagonalState:
    """Apply Z on the qubits set in ``t``: weight of ``k`` moves to ``k ^ t``."""
    dim = 1 << s.n
    if not 0 <= t < dim:
        raise ValueError("flip label out of range")
    w = [s.weights[k ^ t] for k in range(dim)]
    return GraphDiagonalState(s.graph, tuple(w), s.exact, s.normalized)


def permute_labels(weights, n: int, perm) -> tuple:
    """Move qubit ``i`` to ``perm[i-1]`` (1-based) in every label."""
    out = [0] * (1 << n)
    for k, w in enumerate(weights):
        new = 0
        for q in bits(k):
            new |= 1 << (perm[q] - 1)
        out[new] = w
    return tuple(out)


def permute_qubits(s: GraphDiagonalState, perm) -> GraphDiagonalState:
    """Relabel qubits; the result lives on the correspondingly permuted graph."""
    g = s.graph.permuted(perm)
    return GraphDiagonalState(g, permute_labels(s.weights, s.n, perm), s.exact, s.normalized)


def translate(s: GraphDiagonalState, shift: int) -> GraphDiagonalState:
    """Rotate qubit ``i`` to ``i + shift`` (mod n); the graph must be invariant."""
    n = s.n
    perm = [((i - 1 + shift) % n) + 1 for i in range(1, n + 1)]
    if s.graph.permuted(perm) != s.graph:
        raise ValueError(f"graph is not invariant under a cyclic shift by {shift}")
    return GraphDiagonalState(s.graph, permute_labels(s.weights, n, perm), s.exact, s.normalized)


def apply_local_complement(s: GraphDiagonalState, a: int) -> GraphDiagonalState:
    """Express the same physical state (up to local unitaries) on ``LC_a(G)``."""
    from .graphs import label_transform_lc

    g = s.graph
    w = [0] * (1 << s.n)
    for k, x in enumerate(s.weights):
        w[label_transform_lc(g, a, k)] = x
    return GraphDiagonalState(local_complement(g, a), tuple(w), s.exact, s.normalized)


def basis_projector(g: Graph, label: int) -> list:
    """Pauli expansion of ``|G_k><G_k| = 2^-n prod_i (1 + a_i g_i)``.

    Returns ``[(coefficient, PauliString), ...]`` over all 2^n group elements.
    """
    dim = 1 << g.n
    if not 0 <= label < dim:
        raise ValueError("label out of range")
    return [(Fraction(character(label, s), dim), group_element(g, s)) for s in range(dim)]


def depolarize(rho, g: Graph) -> GraphDiagonalState:
    """Graph-basis fidelities ``<G_k| rho |G_k>`` via the stabilizer expansion.

    ``rho`` is either a numpy array (floating result, ``exact=False``) or a
    nested list of exact rationals / ``(re, im)`` rational pairs.
    """
    from . import dense

    dim = 1 << g.n
    exact = dense.is_exact_matrix(rho)
    if exact:
        m = dense.exact_matrix(rho)
        if len(m) != dim:
            raise ValueError(f"operator dimension {len(m)} does not match {dim}")
        dense.check_exact_density(m)
        traces = [dense.exact_pauli_trace(m, group_element(g, s)) for s in range(dim)]
    else:
        import numpy as np

        arr = np.asarray(rho, dtype=complex)
        if arr.shape != (dim, dim):
            raise ValueError(f"operator shape {arr.shape} does not match {(dim, dim)}")
        dense.check_density(arr)
        traces = [dense.pauli_trace(arr, group_element(g, s)) for s in range(dim)]
    weights = []
    for k in range(dim):
        acc = sum(character(k, s) * traces[s] for s in range(dim))
        weights.append(acc / dim)
    if exact:
        return GraphDiagonalState(g, tuple(Fraction(w) for w in weights))
    clipped = [max(float(w), 0.0) for w in weights]
    total = sum(clipped)
    return GraphDiagonalState(g, tuple(w / total for w in clipped), exact=False)
