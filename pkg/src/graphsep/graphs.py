"""Graphs, Pauli strings, stabilizer groups and bipartitions.

Qubits are 1-based in every public function; internally qubit ``i`` lives
at bit ``i - 1`` of the integer masks.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

MAX_QUBITS = 8
ORBIT_MAX_QUBITS = 6
LETTERS = "ABCDEFGH"


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(mask: int):
    """Yield the 0-based positions of the set bits of ``mask``."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a matrix given as a list of row bitmasks."""
    rank = 0
    work = [r for r in rows if r]
    while work:
        pivot = work.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        work = [r ^ pivot if r & low else r for r in work]
        work = [r for r in work if r]
    return rank


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on ``n`` qubits.

    ``nbr[i]`` is the neighbourhood bitmask of the 0-based vertex ``i``.
    """

    n: int
    nbr: tuple

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must lie in 1..{MAX_QUBITS}, got {self.n}")
        if len(self.nbr) != self.n:
            raise ValueError("neighbourhood list length differs from n")
        full = (1 << self.n) - 1
        for i, m in enumerate(self.nbr):
            if m & ~full:
                raise ValueError(f"vertex {i + 1} has a neighbour outside 1..{self.n}")
            if (m >> i) & 1:
                raise ValueError(f"self-loop on vertex {i + 1}")
            for j in bits(m):
                if not (self.nbr[j] >> i) & 1:
                    raise ValueError("adjacency is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        nbr = [0] * n
        for a, b in edges:
            if not (1 <= a <= n and 1 <= b <= n):
                raise ValueError(f"edge {(a, b)} out of range for n={n}")
            if a == b:
                raise ValueError(f"self-loop on vertex {a}")
            nbr[a - 1] |= 1 << (b - 1)
            nbr[b - 1] |= 1 << (a - 1)
        return cls(n, tuple(nbr))

    @classmethod
    def from_adjacency(cls, matrix) -> "Graph":
        n = len(matrix)
        nbr = []
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise ValueError("adjacency matrix is not square")
            nbr.append(sum(1 << j for j, v in enumerate(row) if v))
        return cls(n, tuple(nbr))

    @cached_property
    def edges(self) -> tuple:
        return tuple(
            (i + 1, j + 1) for i in range(self.n) for j in bits(self.nbr[i]) if j > i
        )

    @property
    def adjacency(self) -> list:
        return [[bool((self.nbr[i] >> j) & 1) for j in range(self.n)] for i in range(self.n)]

    def neighbours(self, i: int) -> tuple:
        self._check_vertex(i)
        return tuple(j + 1 for j in bits(self.nbr[i - 1]))

    def degree(self, i: int) -> int:
        self._check_vertex(i)
        return popcount(self.nbr[i - 1])

    def is_connected(self) -> bool:
        seen = 1
        frontier = [0]
        while frontier:
            v = frontier.pop()
            new = self.nbr[v] & ~seen
            seen |= new
            frontier.extend(bits(new))
        return seen == (1 << self.n) - 1

    def permuted(self, perm) -> "Graph":
        """Relabel vertices: old vertex ``i`` becomes ``perm[i-1]`` (1-based)."""
        return Graph.from_edges(self.n, [(perm[a - 1], perm[b - 1]) for a, b in self.edges])

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def _check_vertex(self, i: int):
        if not 1 <= i <= self.n:
            raise IndexError(f"qubit index {i} out of range 1..{self.n}")

    def __repr__(self):
        return f"Graph(n={self.n}, edges={list(self.edges)})"


def star_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(1, j) for j in range(2, n + 1)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(j, j + 1) for j in range(1, n)])


def ring_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(j, j % n + 1) for j in range(1, n + 1)])


def y_graph(n: int) -> Graph:
    """Tail 1-2-3 with qubits 4..n all attached to qubit 3."""
    if n < 4:
        raise ValueError("Y graphs need at least 4 qubits")
    return Graph.from_edges(n, [(1, 2), (2, 3)] + [(3, j) for j in range(4, n + 1)])


_FAMILIES = {"GHZ": star_graph, "C": path_graph, "R": ring_graph, "Y": y_graph}


def builtin_graph(name: str) -> Graph:
    """Resolve names like ``C4``, ``GHZ3``, ``Y5``, ``R5`` or ``Y{N}``."""
    m = re.fullmatch(r"(GHZ|C|R|Y)\{?(\d+)\}?", name.strip())
    if not m:
        raise ValueError(f"unknown graph name {name!r}")
    family, n = m.group(1), int(m.group(2))
    if family == "R" and n < 3:
        raise ValueError("rings need at least 3 qubits")
    if family == "GHZ" and n < 2:
        raise ValueError("GHZ graphs need at least 2 qubits")
    return _FAMILIES[family](n)


def graph_family(g: Graph):
    """Return the builtin name matching ``g`` exactly, or ``None``."""
    for family in ("GHZ", "C", "R", "Y"):
        try:
            if builtin_graph(f"{family}{g.n}") == g:
                return f"{family}{g.n}"
        except ValueError:
            continue
    return None


# --------------------------------------------------------------------------
# Pauli strings

_LETTER = {(0, 0): "1", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_PHASE = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliString:
    """``i**phase`` times a tensor product of I, X, Y, Z.

    Qubit ``i`` carries X if only its x bit is set, Z if only its z bit is
    set and Y if both are set, with ``Y = iXZ``.
    """

    n: int
    x: int
    z: int
    phase: int = 0

    def __post_init__(self):
        full = (1 << self.n) - 1
        if (self.x | self.z) & ~full:
            raise ValueError("mask wider than qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 0)

    @classmethod
    def from_string(cls, s: str) -> "PauliString":
        """Parse e.g. ``"XZ11"``, ``"-iY"``, ``"+ZXZ1"``; ``1``/``I`` is identity."""
        m = re.fullmatch(r"([+-]?)(i?)([1IXYZ]+)", s.strip())
        if not m:
            raise ValueError(f"cannot parse Pauli string {s!r}")
        phase = (2 if m.group(1) == "-" else 0) + (1 if m.group(2) else 0)
        x = z = 0
        for q, c in enumerate(m.group(3)):
            if c in "XY":
                x |= 1 << q
            if c in "ZY":
                z |= 1 << q
        return cls(len(m.group(3)), x, z, phase)

    @property
    def letters(self) -> str:
        return "".join(_LETTER[((self.x >> q) & 1, (self.z >> q) & 1)] for q in range(self.n))

    def letter(self, i: int) -> str:
        return self.letters[i - 1]

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    def y_count(self, mask: int = -1) -> int:
        """Number of Y factors on the qubits selected by ``mask``."""
        return popcount(self.x & self.z & mask)

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_multiply(self, other)

    def __str__(self):
        return ("" if self.phase == 0 else _PHASE[self.phase]) + self.letters


def pauli_multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product ``a * b`` with the phase tracked exactly."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n} qubits")
    x, z = a.x ^ b.x, a.z ^ b.z
    # each letter is i^{xz} X^x Z^z; moving Z^{z_a} past X^{x_b} costs (-1)^{z_a x_b}
    phase = (
        a.phase
        + b.phase
        + popcount(a.x & a.z)
        + popcount(b.x & b.z)
        + 2 * popcount(a.z & b.x)
        - popcount(x & z)
    )
    return PauliString(a.n, x, z, phase)


def stabilizer_generator(g: Graph, i: int) -> PauliString:
    """X on qubit ``i`` and Z on each of its neighbours."""
    if not 1 <= i <= g.n:
        raise IndexError(f"qubit index {i} out of range 1..{g.n}")
    return PauliString(g.n, 1 << (i - 1), g.nbr[i - 1], 0)


def group_element(g: Graph, subset: int) -> PauliString:
    """Ordered product of the generators selected by the bitmask ``subset``."""
    if subset < 0 or subset >> g.n:
        raise ValueError("subset mask wider than qubit count")
    out = PauliString.identity(g.n)
    for q in bits(subset):
        out = pauli_multiply(out, stabilizer_generator(g, q + 1))
    return out


def stabilizer_group(g: Graph) -> list:
    return [group_element(g, s) for s in range(1 << g.n)]


# --------------------------------------------------------------------------
# local complementation


def local_complement(g: Graph, a: int) -> Graph:
    """Invert the neighbourhood of vertex ``a``."""
    if not 1 <= a <= g.n:
        raise IndexError(f"qubit index {a} out of range 1..{g.n}")
    na = g.nbr[a - 1]
    nbr = list(g.nbr)
    for v in bits(na):
        nbr[v] ^= na & ~(1 << v)
    return Graph(g.n, tuple(nbr))


def label_transform_lc(g: Graph, a: int, label: int) -> int:
    """Map a basis label of ``g`` to the matching label after complementing ``a``.

    The signs on the neighbourhood of ``a`` flip iff the sign on ``a`` is -1.
    """
    if not 1 <= a <= g.n:
        raise IndexError(f"qubit index {a} out of range 1..{g.n}")
    if (label >> (a - 1)) & 1:
        return label ^ g.nbr[a - 1]
    return label


def lc_orbit(g: Graph) -> set:
    """All graphs reachable from ``g`` by local complementations."""
    if g.n > ORBIT_MAX_QUBITS:
        raise ValueError(f"orbit enumeration is limited to n <= {ORBIT_MAX_QUBITS}")
    seen = {g}
    queue = deque([g])
    while queue:
        h = queue.popleft()
        for a in range(1, h.n + 1):
            k = local_complement(h, a)
            if k not in seen:
                seen.add(k)
                queue.append(k)
    return seen


def lc_path(src: Graph, dst: Graph):
    """Shortest sequence of complemented vertices turning ``src`` into ``dst``.

    Returns ``None`` when ``dst`` is not in the orbit of ``src``.
    """
    if src.n != dst.n:
        return None
    if src.n > ORBIT_MAX_QUBITS:
        raise ValueError(f"orbit search is limited to n <= {ORBIT_MAX_QUBITS}")
    parent = {src: None}
    queue = deque([src])
    while queue:
        h = queue.popleft()
        if h == dst:
            seq = []
            while parent[h] is not None:
                prev, a = parent[h]
                seq.append(a)
                h = prev
            return seq[::-1]
        for a in range(1, h.n + 1):
            k = local_complement(h, a)
            if k not in parent:
                parent[k] = (h, a)
                queue.append(k)
    return None


def canonical_form(g: Graph) -> tuple:
    """Isomorphism-invariant key: lexicographically least sorted edge list."""
    best = None
    for perm in itertools.permutations(range(1, g.n + 1)):
        key = tuple(sorted(tuple(sorted((perm[a - 1], perm[b - 1]))) for a, b in g.edges))
        if best is None or key < best:
            best = key
    return best


def lc_classes(n: int, connected: bool = True) -> list:
    """Classes of graphs on ``n`` vertices under local complementation and relabelling.

    Each class is returned as a representative (the graph with the fewest
    edges found first).
    """
    if n > 5:
        raise ValueError("class enumeration is limited to n <= 5")
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    keyed = {}
    for chosen in itertools.product((0, 1), repeat=len(pairs)):
        g = Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])
        if connected and not g.is_connected():
            continue
        keyed.setdefault(canonical_form(g), g)
    classes = []
    assigned = set()
    for key in sorted(keyed, key=lambda k: (len(k), k)):
        if key in assigned:
            continue
        rep = keyed[key]
        for h in lc_orbit(rep):
            assigned.add(canonical_form(h))
        classes.append(rep)
    return classes


# --------------------------------------------------------------------------
# bipartitions


@dataclass(frozen=True)
class Bipartition:
    """A cut ``M | complement``; stored as the side without qubit 1."""

    n: int
    mask: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        mask = self.mask & full
        if self.mask & ~full:
            raise ValueError("bipartition mask wider than qubit count")
        if mask & 1:
            mask ^= full
        if not 1 <= popcount(mask) <= self.n - 1:
            raise ValueError("both sides of a bipartition must be nonempty")
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_qubits(cls, n: int, qubits) -> "Bipartition":
        mask = 0
        for q in qubits:
            if not 1 <= q <= n:
                raise IndexError(f"qubit index {q} out of range 1..{n}")
            mask |= 1 << (q - 1)
        return cls(n, mask)

    @classmethod
    def parse(cls, n: int, text: str) -> "Bipartition":
        """Parse ``"AD|BC"``, ``"14|23"`` or a single side like ``"BD"``."""
        side = text.split("|")[0].strip()
        if not side:
            raise ValueError(f"cannot parse bipartition {text!r}")
        if side.isdigit():
            qubits = [int(c) for c in side]
        else:
            qubits = [LETTERS.index(c) + 1 for c in side.upper()]
        b = cls.from_qubits(n, qubits)
        if "|" in text:
            other = text.split("|")[1].strip()
            other_q = [int(c) for c in other] if other.isdigit() else [LETTERS.index(c) + 1 for c in other.upper()]
            if cls.from_qubits(n, other_q) != b or len(set(qubits) | set(other_q)) != n:
                raise ValueError(f"sides of {text!r} do not complement each other")
        return b

    @property
    def complement_mask(self) -> int:
        return ((1 << self.n) - 1) ^ self.mask

    @property
    def sides(self) -> tuple:
        a = tuple(q + 1 for q in bits(self.mask))
        b = tuple(q + 1 for q in bits(self.complement_mask))
        return a, b

    def label(self) -> str:
        """Letter form with the smaller side first (ties: side with qubit 1 first)."""
        inside, outside = self.sides
        if len(inside) < len(outside):
            first, second = inside, outside
        else:
            first, second = outside, inside
        return "".join(LETTERS[q - 1] for q in first) + "|" + "".join(LETTERS[q - 1] for q in second)

    def __str__(self):
        return self.label()

    def sort_key(self):
        inside, outside = self.sides
        small = min(inside, outside, key=lambda s: (len(s), s))
        return (len(small), small)


def all_bipartitions(n: int) -> list:
    """Every bipartition of ``n`` qubits, each once, ordered by smaller side."""
    out = [Bipartition(n, m << 1) for m in range(1, 1 << (n - 1))]
    return sorted(out, key=Bipartition.sort_key)


def cut_matrix_rows(g: Graph, m: Bipartition) -> list:
    """Rows of the adjacency block ``M x complement`` as bitmasks."""
    return [g.nbr[i] & m.complement_mask for i in bits(m.mask)]


def cut_rank(g: Graph, m: Bipartition) -> int:
    """Number of Bell pairs shared by the pure graph state across ``m``."""
    if m.n != g.n:
        raise ValueError("bipartition and graph sizes differ")
    return gf2_rank(cut_matrix_rows(g, m))
