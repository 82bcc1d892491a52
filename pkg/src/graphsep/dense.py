"""Dense reference implementations (the oracle).

Operators are plain complex numpy arrays of shape ``(2^n, 2^n)``. The
computational basis index uses qubit 1 as the most significant bit, the
usual Kronecker ordering. Everything here is brute force and exists to
cross-check the stabilizer-side computations.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import kernels
from .graphs import Bipartition, Graph, PauliString, bits, popcount
from .states import GraphDiagonalState, to_fraction

DenseOperator = np.ndarray

DENSE_MAX_QUBITS = 8
STATE_MAX_QUBITS = 6
PPT_TOL = 1e-9

_SINGLE = {
    "1": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_IPOW = (1, 1j, -1, -1j)


def _check_size(n: int, limit: int):
    if n > limit:
        raise ValueError(f"dense operators are limited to n <= {limit} (got {n})")


def comp_to_mask(c: int, n: int) -> int:
    """Computational index (qubit 1 = MSB) -> qubit bitmask (qubit i = bit i-1)."""
    m = 0
    for i in range(n):
        if (c >> (n - 1 - i)) & 1:
            m |= 1 << i
    return m


def mask_to_comp(m: int, n: int) -> int:
    # bit reversal is its own inverse
    return comp_to_mask(m, n)


def pauli_to_dense(p: PauliString) -> DenseOperator:
    _check_size(p.n, DENSE_MAX_QUBITS)
    out = np.array([[_IPOW[p.phase % 4]]], dtype=complex)
    for ch in p.letters:
        out = np.kron(out, _SINGLE[ch])
    return out


def _pauli_action(p: PauliString):
    """For each computational index x: (target index, coefficient) with P|x> = c|x'>."""
    n = p.n
    dim = 1 << n
    ycount = popcount(p.x & p.z)
    targets = np.empty(dim, dtype=np.int64)
    coeffs = []
    for c in range(dim):
        q = comp_to_mask(c, n)
        targets[c] = mask_to_comp(q ^ p.x, n)
        sign = popcount(p.z & q) & 1
        coeffs.append((p.phase + ycount + 2 * sign) % 4)
    return targets, coeffs


def graph_state_amplitudes(g: Graph, label: int = 0) -> np.ndarray:
    """Real amplitudes of ``|G_label>`` in the computational basis."""
    n = g.n
    _check_size(n, DENSE_MAX_QUBITS)
    dim = 1 << n
    amp = np.empty(dim)
    norm = 1.0 / np.sqrt(dim)
    for c in range(dim):
        q = comp_to_mask(c, n)
        edges = sum(popcount(g.nbr[i] & q) for i in bits(q)) // 2
        amp[c] = norm * (-1) ** ((edges + popcount(label & q)) & 1)
    return amp


def graph_basis_matrix(g: Graph) -> np.ndarray:
    """Columns are the graph-basis vectors ordered by label."""
    return np.column_stack([graph_state_amplitudes(g, k) for k in range(1 << g.n)])


def state_to_dense(s: GraphDiagonalState) -> DenseOperator:
    _check_size(s.n, STATE_MAX_QUBITS)
    v = graph_basis_matrix(s.graph)
    w = np.array([float(x) for x in s.weights])
    return ((v * w) @ v.T).astype(complex)


def diagonal_operator(g: Graph, coeffs) -> DenseOperator:
    """``sum_k c_k |G_k><G_k|`` for arbitrary real coefficients."""
    _check_size(g.n, STATE_MAX_QUBITS)
    v = graph_basis_matrix(g)
    c = np.array([float(x) for x in coeffs])
    return ((v * c) @ v.T).astype(complex)


def exact_state_matrix(s: GraphDiagonalState) -> list:
    """Exact rational matrix of ``s`` (all entries are real)."""
    _check_size(s.n, STATE_MAX_QUBITS)
    n = s.n
    dim = 1 << n
    qmask = [comp_to_mask(c, n) for c in range(dim)]
    edge_par = [(sum(popcount(s.graph.nbr[i] & q) for i in bits(q)) // 2) & 1 for q in qmask]
    out = [[Fraction(0)] * dim for _ in range(dim)]
    for k, lam in enumerate(s.weights):
        if not lam:
            continue
        lam = Fraction(lam) / dim
        sgn = [1 - 2 * ((edge_par[c] + popcount(k & qmask[c])) & 1) for c in range(dim)]
        for a in range(dim):
            for b in range(dim):
                out[a][b] += lam * sgn[a] * sgn[b]
    return out


def partial_transpose(op: DenseOperator, m: Bipartition) -> DenseOperator:
    """Transpose the tensor factors of the qubits in ``m.mask``."""
    op = np.asarray(op)
    n = m.n
    if op.shape != (1 << n, 1 << n):
        raise ValueError("operator size does not match the bipartition")
    t = op.reshape((2,) * (2 * n))
    axes = list(range(2 * n))
    for q in bits(m.mask):
        axes[q], axes[n + q] = axes[n + q], axes[q]
    return t.transpose(axes).reshape(1 << n, 1 << n)


def hermitian_embedding(op: DenseOperator) -> np.ndarray:
    """Real symmetric ``[[Re, -Im], [Im, Re]]``; each eigenvalue appears twice."""
    op = np.asarray(op, dtype=complex)
    re, im = op.real, op.imag
    return np.block([[re, -im], [im, re]])


def is_hermitian(op: DenseOperator, tol: float = 1e-10) -> bool:
    op = np.asarray(op, dtype=complex)
    return bool(np.max(np.abs(op - op.conj().T), initial=0.0) <= tol)


def eigenvalues(op: DenseOperator) -> np.ndarray:
    """All eigenvalues of a Hermitian operator, ascending (Jacobi)."""
    op = np.asarray(op, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError("operator is not square")
    if not is_hermitian(op):
        raise ValueError("operator is not Hermitian")
    if np.max(np.abs(op.imag), initial=0.0) == 0.0:
        vals, _ = kernels.jacobi_eigvalsh(op.real)
        return vals
    vals, _ = kernels.jacobi_eigvalsh(hermitian_embedding(op))
    return vals[::2]


def min_eigenvalue(op: DenseOperator) -> float:
    return float(eigenvalues(op)[0])


def is_ppt(s: GraphDiagonalState, m: Bipartition, tol: float = PPT_TOL) -> bool:
    return min_eigenvalue(partial_transpose(state_to_dense(s), m)) >= -tol


def schmidt_rank(g: Graph, m: Bipartition) -> int:
    _check_size(g.n, STATE_MAX_QUBITS)
    n = g.n
    psi = graph_state_amplitudes(g).reshape((2,) * n)
    inside = [q for q in bits(m.mask)]
    outside = [q for q in bits(m.complement_mask)]
    mat = psi.transpose(inside + outside).reshape(1 << len(inside), 1 << len(outside))
    return int(np.linalg.matrix_rank(mat, tol=1e-10))


def graph_basis_view(op: DenseOperator, g: Graph) -> np.ndarray:
    """``V^T op V`` with ``V`` the graph basis."""
    v = graph_basis_matrix(g)
    return v.T @ np.asarray(op) @ v


def pt_graph_diagonal(s: GraphDiagonalState, m: Bipartition):
    """Graph-basis diagonal of ``rho^{T_M}`` and the largest off-diagonal modulus."""
    view = graph_basis_view(partial_transpose(state_to_dense(s), m), s.graph)
    diag = np.real(np.diag(view)).copy()
    off = view - np.diag(np.diag(view))
    return diag, float(np.max(np.abs(off), initial=0.0))


# --------------------------------------------------------------------------
# density checks and Pauli traces (used by states.depolarize)


def check_density(op: DenseOperator, tol: float = PPT_TOL) -> None:
    op = np.asarray(op, dtype=complex)
    if not is_hermitian(op, tol):
        raise ValueError("operator is not Hermitian")
    tr = np.trace(op)
    if abs(tr - 1) > tol:
        raise ValueError(f"trace {tr.real:.3g} differs from 1")
    if min_eigenvalue(op) < -tol:
        raise ValueError("operator has a negative eigenvalue")


def pauli_trace(op: DenseOperator, p: PauliString) -> float:
    """Real part of ``Tr(op P)`` (exact up to rounding for Hermitian op, P)."""
    targets, coeffs = _pauli_action(p)
    op = np.asarray(op, dtype=complex)
    acc = 0j
    for x in range(op.shape[0]):
        acc += op[x, targets[x]] * _IPOW[coeffs[x]]
    return float(acc.real)


def _as_complex_fraction(v):
    if isinstance(v, (tuple, list)):
        if len(v) != 2:
            raise ValueError("complex entries are (re, im) pairs")
        return to_fraction(v[0]), to_fraction(v[1])
    return to_fraction(v), Fraction(0)


def is_exact_matrix(rho) -> bool:
    if isinstance(rho, np.ndarray):
        return rho.dtype == object
    try:
        first = rho[0][0]
    except (TypeError, IndexError, KeyError):
        return False
    if isinstance(first, (tuple, list)):
        first = first[0]
    return isinstance(first, (int, Fraction, str)) and not isinstance(first, bool)


def exact_matrix(rho) -> list:
    """Nested list of ``(re, im)`` Fraction pairs."""
    rows = [[_as_complex_fraction(v) for v in row] for row in rho]
    dim = len(rows)
    if any(len(r) != dim for r in rows):
        raise ValueError("matrix is not square")
    return rows


def check_exact_density(m: list, tol: float = PPT_TOL) -> None:
    dim = len(m)
    for a in range(dim):
        for b in range(dim):
            re, im = m[a][b]
            if (re, -im) != tuple(m[b][a]):
                raise ValueError("operator is not Hermitian")
    tr = sum(m[a][a][0] for a in range(dim))
    if tr != 1:
        raise ValueError(f"trace {tr} differs from 1")
    arr = np.array([[complex(float(re), float(im)) for re, im in row] for row in m])
    if min_eigenvalue(arr) < -tol:
        raise ValueError("operator has a negative eigenvalue")


def exact_pauli_trace(m: list, p: PauliString) -> Fraction:
    """``Tr(m P)`` exactly; must be real for Hermitian inputs."""
    targets, coeffs = _pauli_action(p)
    re_acc = Fraction(0)
    im_acc = Fraction(0)
    for x in range(len(m)):
        re, im = m[x][int(targets[x])]
        c = coeffs[x]
        # multiply (re + i im) by i^c
        for _ in range(c):
            re, im = -im, re
        re_acc += re
        im_acc += im
    if im_acc:
        raise ValueError("Pauli expectation is not real; operator is not Hermitian")
    return re_acc


def partial_trace(op: DenseOperator, keep_mask: int, n: int) -> DenseOperator:
    """Reduced operator on the qubits in ``keep_mask`` (bit ``i-1`` = qubit ``i``)."""
    op = np.asarray(op)
    keep = list(bits(keep_mask))
    drop = [q for q in range(n) if not (keep_mask >> q) & 1]
    t = op.reshape((2,) * (2 * n))
    t = t.transpose(keep + drop + [n + q for q in keep] + [n + q for q in drop])
    dk, dd = 1 << len(keep), 1 << len(drop)
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def matrix_rank(op: DenseOperator, tol: float = 1e-9) -> int:
    vals = eigenvalues(op)
    return int(np.sum(np.abs(vals) > tol))
