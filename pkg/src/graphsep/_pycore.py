"""Pure-Python implementations of the kernels in ``_core.pyx``.

Same signatures and results; used when the extension is not built or
``GRAPHSEP_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import math

import numpy as np


def jacobi_eigvalsh(a, tol: float = 1e-14, max_sweeps: int = 100):
    m = np.array(a, dtype=np.float64, copy=True)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("matrix is not square")
    scale = math.sqrt(float(np.sum(m * m)))
    if scale == 0.0:
        return np.zeros(n), 0
    sweep = 0
    iu = np.triu_indices(n, 1)
    while sweep < max_sweeps:
        off = float(np.sum(m[iu] ** 2))
        if math.sqrt(2.0 * off) <= tol * scale:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = m[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (m[q, q] - m[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:  # theta**2 would overflow
                    t = 0.5 / theta
                elif theta >= 0:
                    t = 1.0 / (theta + math.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                colp = m[:, p].copy()
                colq = m[:, q]
                m[:, p] = c * colp - s * colq
                m[:, q] = s * colp + c * colq
                rowp = m[p, :].copy()
                rowq = m[q, :]
                m[p, :] = c * rowp - s * rowq
                m[q, :] = s * rowp + c * rowq
                m[p, q] = 0.0
                m[q, p] = 0.0
    return np.sort(np.diag(m)), sweep


def walsh_numerators(signs, n: int):
    dim = 1 << n
    eps = np.asarray(signs, dtype=np.int64)
    if eps.shape[0] != dim:
        raise ValueError("sign vector length must be 2^n")
    # in-place fast Walsh-Hadamard transform
    f = eps.copy()
    h = 1
    while h < dim:
        for i in range(0, dim, 2 * h):
            a = f[i:i + h].copy()
            b = f[i + h:i + 2 * h].copy()
            f[i:i + h] = a + b
            f[i + h:i + 2 * h] = a - b
        h *= 2
    return f


def xor_convolution_matrix(f, n: int):
    dim = 1 << n
    idx = np.arange(dim)
    return np.asarray(f, dtype=np.int64)[idx[:, None] ^ idx[None, :]]


def bareiss_pivot(m, r, alpha, det):
    """List-of-lists version; never overflows."""
    ar = alpha[r]
    mr = m[r]
    out = []
    for i, row in enumerate(m):
        if i == r:
            out.append(list(row))
            continue
        ai = alpha[i]
        if ai == 0:
            out.append([(ar * v) // det for v in row])
        else:
            out.append([(ar * v - ai * w) // det for v, w in zip(row, mr)])
    return out


def apply_sparse(m, idx, val):
    return [sum(row[i] * v for i, v in zip(idx, val)) for row in m]


def first_positive(indptr, indices, data, y, start=0):
    for j in range(start, len(indptr) - 1):
        acc = 0
        for t in range(indptr[j], indptr[j + 1]):
            acc += y[indices[t]] * data[t]
        if acc > 0:
            return j
    return -1
