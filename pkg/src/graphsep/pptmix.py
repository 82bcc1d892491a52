"""PPT mixtures of graph-diagonal states as exact linear programs.

For a graph-diagonal state the partial transpose across ``M`` is again
graph-diagonal, with weights ``T^(M) lambda`` where

    T_jk = 2^-n * f(j xor k),   f(d) = sum_S eps_S (-1)^{|d & S|},

and ``eps_S = (-1)^(number of Y factors of the group element S inside M)``.
``T`` splits into blocks along the cosets of the subgroup generated by the
support of ``f``. The PPT cone ``{x >= 0, T x >= 0}`` of a block is
described by its extreme rays when the block is small (at most 16
labels) and by explicit inequality rows otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import kernels
from .graphs import (Bipartition, Graph, all_bipartitions, cut_rank, group_element, local_complement,
                     popcount)
from .lp import LpError, check_farkas, farkas_holds, float_hint, scale_to_integers, solve_feasibility
from .states import GraphDiagonalState, to_fraction

log = logging.getLogger(__name__)

LP_MAX_QUBITS = 6
RAY_BLOCK_LIMIT = 16


# --------------------------------------------------------------------------
# transfer matrices


@dataclass(frozen=True)
class TransferMatrix:
    """``T^(M)`` stored as the integer vector ``f`` with ``T_jk = f[j ^ k] / 2^n``."""

    graph: Graph
    part: Bipartition
    f: tuple

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def dim(self) -> int:
        return 1 << self.graph.n

    def entry(self, j: int, k: int) -> Fraction:
        return Fraction(self.f[j ^ k], self.dim)

    def matrix(self) -> list:
        return [[self.entry(j, k) for k in range(self.dim)] for j in range(self.dim)]

    def numerators(self):
        """Integer matrix ``2^n T`` as a numpy array."""
        return kernels.xor_convolution_matrix(self.f, self.n)

    def apply(self, vec) -> list:
        vec = [to_fraction(v) for v in vec]
        if len(vec) != self.dim:
            raise ValueError("vector length differs from 2^n")
        support = self.support
        out = []
        for j in range(self.dim):
            acc = Fraction(0)
            for d in support:
                v = vec[j ^ d]
                if v:
                    acc += self.f[d] * v
            out.append(acc / self.dim)
        return out

    @property
    def support(self) -> tuple:
        return tuple(d for d, v in enumerate(self.f) if v)

    @property
    def subgroup(self) -> tuple:
        """Span of the support of ``f`` (sorted)."""
        span = {0}
        for d in self.support:
            if d not in span:
                span |= {s ^ d for s in span}
        return tuple(sorted(span))

    def blocks(self) -> list:
        """Cosets of :attr:`subgroup`; ``T`` is block diagonal along them."""
        h = self.subgroup
        seen = set()
        out = []
        for k in range(self.dim):
            if k in seen:
                continue
            block = tuple(k ^ x for x in h)
            seen.update(block)
            out.append(block)
        return out

    def local_matrix(self) -> tuple:
        """Integer matrix of one block, indexed by :attr:`subgroup` order."""
        h = self.subgroup
        g = 0
        for v in self.f:
            g = gcd(g, v)
        return tuple(tuple(self.f[a ^ b] // g for b in h) for a in h)


def epsilon_signs(g: Graph, m: Bipartition) -> list:
    if m.n != g.n:
        raise ValueError("bipartition and graph sizes differ")
    return [-1 if group_element(g, s).y_count(m.mask) & 1 else 1 for s in range(1 << g.n)]


@lru_cache(maxsize=4096)
def transfer_matrix(g: Graph, m: Bipartition) -> TransferMatrix:
    if g.n > LP_MAX_QUBITS:
        raise ValueError(f"transfer matrices are limited to n <= {LP_MAX_QUBITS}")
    f = kernels.walsh_numerators(epsilon_signs(g, m), g.n)
    return TransferMatrix(g, m, tuple(int(v) for v in f))


def is_ppt_exact(s: GraphDiagonalState, m: Bipartition) -> bool:
    return all(v >= 0 for v in transfer_matrix(s.graph, m).apply(s.weights))


# --------------------------------------------------------------------------
# extreme rays of {x >= 0, F x >= 0} by double description


@lru_cache(maxsize=256)
def cone_rays(local: tuple) -> tuple:
    """Extreme rays (primitive integer tuples) of ``{x >= 0, F x >= 0}``."""
    d = len(local)
    rays = []
    for i in range(d):
        e = tuple(1 if k == i else 0 for k in range(d))
        rays.append((e, ((1 << d) - 1) ^ (1 << i)))
    for ci, row in enumerate(local):
        cbit = 1 << (d + ci)
        vals = [sum(a * b for a, b in zip(row, r)) for r, _ in rays]
        keep = []
        pos = []
        neg = []
        for (r, z), v in zip(rays, vals):
            if v > 0:
                pos.append((r, z, v))
                keep.append((r, z))
            elif v == 0:
                keep.append((r, z | cbit))
            else:
                neg.append((r, z, v))
        zsets = [z for _, z in rays]
        for rp, zp, vp in pos:
            for rq, zq, vq in neg:
                common = zp & zq
                # necessary rank condition for adjacency in a pointed d-dim cone
                if popcount(common) < d - 2:
                    continue
                adjacent = True
                for z in zsets:
                    if z != zp and z != zq and common & z == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                w = [vp * b - vq * a for a, b in zip(rp, rq)]
                g = 0
                for x in w:
                    g = gcd(g, x)
                w = tuple(x // g for x in w)
                keep.append((w, common | cbit))
        rays = keep
    return tuple(sorted(r for r, _ in rays))


def canonical_two_pair_block() -> TransferMatrix:
    """Transfer matrix of two Bell pairs (edges 1-2, 3-4) across BD|AC."""
    return transfer_matrix(Graph.from_edges(4, [(1, 2), (3, 4)]), Bipartition.from_qubits(4, [2, 4]))


def _match_two_pair(row: tuple, h: tuple):
    """Linear bijection ``phi`` from GF(2)^4 onto ``h`` with ``row[phi(v)] == LOCAL_ROW[v]``.

    ``row`` is indexed like ``h``; returns ``[index in h of phi(v) for v in 0..15]``.
    """
    from ._canonical_rays import LOCAL_ROW

    pos = {x: i for i, x in enumerate(h)}
    cands = [[x for x in h if x and row[pos[x]] == LOCAL_ROW[1 << i]] for i in range(4)]

    def extend(images, span):
        i = len(images)
        if i == 4:
            return images
        for u in cands[i]:
            if u in span:
                continue
            new_span = span | {s ^ u for s in span}
            ok = True
            for v in range(1 << i, 1 << (i + 1)):
                img = u
                for b in range(i):
                    if (v >> b) & 1:
                        img ^= images[b]
                if row[pos[img]] != LOCAL_ROW[v]:
                    ok = False
                    break
            if ok:
                found = extend(images + [u], new_span)
                if found:
                    return found
        return None

    images = extend([], {0})
    if images is None:
        return None
    phi = []
    for v in range(16):
        img = 0
        for b in range(4):
            if (v >> b) & 1:
                img ^= images[b]
        phi.append(pos[img])
    return phi


@lru_cache(maxsize=256)
def block_rays(local: tuple) -> tuple:
    """Extreme rays of one block; 16-label blocks reuse the precomputed two-pair cone."""
    if len(local) == 16:
        from ._canonical_rays import RAYS

        h = tuple(range(16))
        phi = _match_two_pair(local[0], h) if _is_xor_matrix(local) else None
        if phi is not None:
            out = []
            for ray in RAYS:
                r = [0] * 16
                for v, val in enumerate(ray):
                    r[phi[v]] = val
                out.append(tuple(r))
            return tuple(sorted(out))
    return cone_rays(local)


def _is_xor_matrix(local: tuple) -> bool:
    d = len(local)
    return all(local[a][b] == local[0][a ^ b] for a in range(d) for b in range(d))


# --------------------------------------------------------------------------
# the LP


@dataclass
class Feasible:
    """Per-partition PPT components summing to the input weights."""

    graph: Graph
    components: dict  # Bipartition -> tuple of Fractions (unnormalized)

    feasible = True

    def parts(self) -> list:
        return [m for m, x in self.components.items() if any(x)]


@dataclass
class Infeasible:
    """Farkas dual: ``y . lambda < 0`` and ``y`` nonnegative on every PPT cone."""

    graph: Graph
    y: tuple
    parts: tuple
    value: Fraction = field(default=Fraction(0))

    feasible = False


@dataclass
class MixtureLp:
    graph: Graph
    parts: list
    columns: list
    owners: list  # (part, kind, payload)
    nrows: int
    sparse: kernels.SparseColumns = None

    def __post_init__(self):
        if self.sparse is None:
            self.sparse = kernels.SparseColumns(self.columns)

    def rhs(self, weights) -> list:
        return [to_fraction(w) for w in weights] + [Fraction(0)] * (self.nrows - (1 << self.graph.n))


@lru_cache(maxsize=256)
def _build_lp(g: Graph, parts: tuple) -> MixtureLp:
    dim = 1 << g.n
    columns = []
    owners = []
    nrows = dim
    for m in parts:
        tm = transfer_matrix(g, m)
        local = tm.local_matrix()
        for block in tm.blocks():
            if len(block) <= RAY_BLOCK_LIMIT:
                for ray in block_rays(local):
                    col = {block[i]: v for i, v in enumerate(ray) if v}
                    columns.append(col)
                    owners.append((m, "ray", col))
            else:
                base = nrows
                nrows += len(block)
                for i, k in enumerate(block):
                    col = {k: 1}
                    for i2 in range(len(block)):
                        if local[i2][i]:
                            col[base + i2] = local[i2][i]
                    columns.append(col)
                    owners.append((m, "var", k))
                for i2 in range(len(block)):
                    columns.append({base + i2: -1})
                    owners.append((m, "slack", None))
    return MixtureLp(g, list(parts), columns, owners, nrows)


def _as_parts(g: Graph, parts) -> tuple:
    if parts is None or parts == "all":
        return tuple(all_bipartitions(g.n))
    if parts == "1bp":
        return tuple(one_bp_partitions(g))
    parts = tuple(parts)
    if not parts:
        raise ValueError("need at least one bipartition")
    for m in parts:
        if m.n != g.n:
            raise ValueError("bipartition size differs from graph")
    return parts


def is_ppt_mixture(s: GraphDiagonalState, parts=None, float_guided: bool = True):
    """Exact feasibility of ``lambda = sum_M x_M`` with each ``x_M`` PPT across ``M``.

    ``parts`` is a list of bipartitions, ``"all"`` (default) or ``"1bp"``.
    Returns :class:`Feasible` or :class:`Infeasible`; both are re-verified
    before being returned. ``float_guided`` lets a floating-point solver
    propose the answer; the proposal is only used after an exact check.
    """
    if not s.exact:
        raise ValueError("the LP needs exact weights")
    g = s.graph
    if g.n > LP_MAX_QUBITS:
        raise ValueError(f"LP size overflow: n = {g.n} > {LP_MAX_QUBITS}")
    parts = _as_parts(g, parts)
    lp = _build_lp(g, parts)
    b = lp.rhs(s.weights)
    res = solve_feasibility(lp.sparse, b, lp.nrows, float_guided=float_guided)
    if res.feasible:
        cert = _feasible_from_solution(lp, res.solution, s)
    else:
        dim = 1 << g.n
        y = tuple(res.farkas[:dim])
        if not check_farkas(lp.columns, b, res.farkas):
            raise LpError("Farkas vector failed re-verification")
        value = sum(a * w for a, w in zip(y, s.weights))
        cert = Infeasible(g, y, parts, value)
    if not verify_certificate(cert, s):
        raise LpError("LP certificate failed re-verification")
    return cert


def _feasible_from_solution(lp: MixtureLp, solution: dict, s: GraphDiagonalState) -> Feasible:
    dim = 1 << s.n
    comps = {m: [Fraction(0)] * dim for m in lp.parts}
    for j, v in solution.items():
        m, kind, payload = lp.owners[j]
        if kind == "ray":
            for k, a in payload.items():
                comps[m][k] += a * v
        elif kind == "var":
            comps[m][payload] += v
    return Feasible(s.graph, {m: tuple(x) for m, x in comps.items() if any(x)})


def verify_certificate(cert, s: GraphDiagonalState) -> bool:
    """Exact re-check of either certificate type against ``s``."""
    g = s.graph
    if cert.feasible:
        dim = 1 << g.n
        acc = [Fraction(0)] * dim
        for m, x in cert.components.items():
            if any(v < 0 for v in x):
                return False
            if any(v < 0 for v in transfer_matrix(g, m).apply(x)):
                return False
            for k, v in enumerate(x):
                acc[k] += v
        return acc == list(s.weights)
    if sum(a * w for a, w in zip(cert.y, s.weights)) >= 0:
        return False
    return all(in_dual_cone(g, m, cert.y) for m in cert.parts)


def in_dual_cone(g: Graph, m: Bipartition, y) -> bool:
    """``y . x >= 0`` for every ``x`` in the PPT cone of ``m``.

    Equivalently ``y = p + T q`` with ``p, q >= 0``. Small blocks are checked
    against the extreme rays, large blocks by an exact feasibility LP.
    """
    y, _ = scale_to_integers(y)  # a positive rescaling keeps the cone test
    tm = transfer_matrix(g, m)
    local = tm.local_matrix()
    for block in tm.blocks():
        yb = [y[k] for k in block]
        if len(block) <= RAY_BLOCK_LIMIT:
            for ray in block_rays(local):
                if sum(a * b for a, b in zip(ray, yb) if a) < 0:
                    return False
            continue
        if all(v >= 0 for v in yb):
            continue
        # p + F q = y_b (F = scaled block matrix, positive multiple of T)
        d = len(block)
        ints, _ = scale_to_integers(yb)
        sign = [(-1 if v < 0 else 1) for v in ints]
        cols = [{i: sign[i]} for i in range(d)]
        for k in range(d):
            cols.append({i: sign[i] * local[i][k] for i in range(d) if local[i][k]})
        res = solve_feasibility(cols, [abs(v) for v in ints], d)
        if not res.feasible:
            return False
    return True


# --------------------------------------------------------------------------
# witnesses from LP duals


def strict_witness_lp(s: GraphDiagonalState, parts=None, exact: bool = False):
    """Search an exact ``y`` with ``T^(M) y >= 0`` for all ``M`` and ``y . lambda < 0``.

    This is the Farkas alternative of ``lambda = sum_M T^(M) z_M``, ``z >= 0``.
    Returns ``y`` (integer Fractions) or ``None``. A returned ``y`` always
    satisfies both conditions exactly. With ``exact=False`` the search stops
    at ``None`` as soon as the floating-point solver finds the system
    feasible; ``None`` then means "no strict witness found", which only
    affects the kind of witness reported, never a verdict. ``exact=True``
    decides the question with the exact simplex.
    """
    g = s.graph
    parts = _as_parts(g, parts)
    lp = _build_strict_lp(g, parts)
    b = [to_fraction(w) for w in s.weights]
    nrows = 1 << g.n
    if not exact:
        hint = float_hint(lp, b, nrows)
        if hint is not None and hint[0] == "basis":
            return None
        if hint is not None:
            y = list(_primitive(hint[1]))
            if farkas_holds(lp, b, y):
                return tuple(y)
    res = solve_feasibility(lp, b, nrows, float_guided=True)
    if res.feasible:
        return None
    return tuple(res.farkas)


@lru_cache(maxsize=64)
def _build_strict_lp(g: Graph, parts: tuple):
    dim = 1 << g.n
    columns = []
    seen = set()
    for m in parts:
        tm = transfer_matrix(g, m)
        for k in range(dim):
            col = tuple((j, tm.f[j ^ k]) for j in range(dim) if tm.f[j ^ k])
            if col not in seen:
                seen.add(col)
                columns.append(dict(col))
    return kernels.SparseColumns(columns)


def dual_witness(cert, s: GraphDiagonalState | None = None):
    """Turn an :class:`Infeasible` certificate into a :class:`DiagonalWitness`.

    When the state is given, a witness with ``T^(M) w >= 0`` for every ``M``
    is searched first; otherwise (or if none exists) the Farkas vector
    itself is returned, which is nonnegative on every PPT mixture.
    """
    from .witnesses import DiagonalWitness

    if cert.feasible:
        raise ValueError("a feasible certificate carries no witness")
    g = cert.graph
    if s is not None:
        if sum(a * w for a, w in zip(cert.y, s.weights)) >= 0:
            raise LpError("certificate does not separate the given state")
        y = strict_witness_lp(s, list(cert.parts))
        if y is not None:
            return DiagonalWitness(g, _primitive(y), name="lp-dual", kind="strict")
    if not all(in_dual_cone(g, m, cert.y) for m in cert.parts):
        raise LpError("Farkas certificate failed re-verification")
    return DiagonalWitness(g, _primitive(cert.y), name="lp-dual", kind="decomposable",
                           parts=tuple(cert.parts))


def _primitive(y) -> tuple:
    ints, _ = scale_to_integers(y)
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    return tuple(Fraction(v // g) for v in ints)


# --------------------------------------------------------------------------
# partitions


def one_bp_partitions(g: Graph) -> list:
    return [m for m in all_bipartitions(g.n) if cut_rank(g, m) == 1]


def lemma9_applicable(g: Graph, m: Bipartition):
    """Search the LC orbit for a form with a leaf on the 3-side whose neighbour is on that side too.

    The leaf can then be decoupled by a local operation on it and its
    neighbour, which reduces the cut to a four-qubit one.

    Returns ``(found, sequence)`` where ``sequence`` lists the complemented
    vertices (1-based) leading to that form; ``(False, None)`` if none.
    """
    if g.n != 5:
        raise ValueError("the criterion applies to five qubits")
    inside, outside = m.sides
    if sorted((len(inside), len(outside))) != [2, 3]:
        raise ValueError("need a 2-vs-3 bipartition")
    three = inside if len(inside) == 3 else outside
    tmask = sum(1 << (q - 1) for q in three)
    from collections import deque

    parent = {g: None}
    queue = deque([g])
    while queue:
        h = queue.popleft()
        if any(popcount(h.nbr[q - 1]) == 1 and h.nbr[q - 1] & tmask for q in three):
            seq = []
            while parent[h] is not None:
                prev, a = parent[h]
                seq.append(a)
                h = prev
            return True, seq[::-1]
        for a in range(1, h.n + 1):
            k = local_complement(h, a)
            if k not in parent:
                parent[k] = (h, a)
                queue.append(k)
    return False, None


def classify_yn(s: GraphDiagonalState):
    """Exact decision for Y_N graphs: the 1BP-restricted PPT-mixture LP."""
    from .certificates import Biseparable, Decomposition, Gme, component_from_ppt
    from .graphs import y_graph
    from .witnesses import validate_witness

    g = s.graph
    if g.n < 4 or g.n > LP_MAX_QUBITS or g != y_graph(g.n):
        raise ValueError("classify_yn expects a Y_N graph with 4 <= N <= 6")
    cert = is_ppt_mixture(s, "1bp")
    if cert.feasible:
        terms = []
        for m, x in cert.components.items():
            terms.append(component_from_ppt(g, m, x))
        return Biseparable(Decomposition(s, tuple(terms)))
    w = dual_witness(cert, s)
    if not validate_witness(w).valid:
        raise LpError("dual witness failed validation")
    return Gme(w, w.evaluate(s))


def counterexample_state() -> GraphDiagonalState:
    """Uniform mixture of six C4 basis states, PPT across AD|BC."""
    from .graphs import builtin_graph

    labels = ["++--", "-++-", "---+", "+-+-", "+---", "+--+"]
    return GraphDiagonalState.from_labels(builtin_graph("C4"), {k: Fraction(1, 6) for k in labels})


# --------------------------------------------------------------------------
# LP file export


def export_lp(s: GraphDiagonalState, parts=None) -> str:
    """CPLEX LP-format text of the feasibility problem (weights as x_M_k)."""
    g = s.graph
    parts = _as_parts(g, parts)
    dim = 1 << g.n
    rhs, den = scale_to_integers(s.weights)
    lines = ["\\ PPT-mixture feasibility for a graph-diagonal state",
             f"\\ weights scaled by {den} so every coefficient is an integer",
             "Minimize", " obj: 0", "Subject To"]

    def var(m, k):
        return f"x_{m.mask}_{k}"

    for k in range(dim):
        terms = " + ".join(var(m, k) for m in parts)
        lines.append(f" sum_{k}: {terms} = {rhs[k]}")
    for m in parts:
        tm = transfer_matrix(g, m)
        for j in range(dim):
            terms = []
            for k in range(dim):
                c = tm.f[j ^ k]
                if c:
                    terms.append(f"{'+' if c > 0 else '-'} {abs(c)} {var(m, k)}")
            body = " ".join(terms).lstrip("+ ")
            lines.append(f" ppt_{m.mask}_{j}: {body} >= 0")
    lines.append("Bounds")
    for m in parts:
        for k in range(dim):
            lines.append(f" {var(m, k)} >= 0")
    lines.append("End")
    return "\n".join(lines) + "\n"
