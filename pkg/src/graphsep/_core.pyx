# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: cyclic Jacobi eigensolver and character sums."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef inline int _popcount(long long x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def jacobi_eigvalsh(a, double tol=1e-14, int max_sweeps=100):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues ascending, sweeps used)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] m = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p, q, k
    cdef double off, scale, apq, app, aqq, theta, t, c, s, mkp, mkq
    cdef int sweep = 0
    cdef double[:, ::1] v = m
    if m.shape[1] != n:
        raise ValueError("matrix is not square")
    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += v[p, q] * v[p, q]
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), 0
    with nogil:
        while sweep < max_sweeps:
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += v[p, q] * v[p, q]
            if sqrt(2.0 * off) <= tol * scale:
                break
            sweep += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = v[p, q]
                    if fabs(apq) <= 1e-300:
                        continue
                    app = v[p, p]
                    aqq = v[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if fabs(theta) > 1e150:  # theta**2 would overflow
                        t = 0.5 / theta
                    elif theta >= 0:
                        t = 1.0 / (theta + sqrt(1.0 + theta * theta))
                    else:
                        t = -1.0 / (-theta + sqrt(1.0 + theta * theta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        mkp = v[k, p]
                        mkq = v[k, q]
                        v[k, p] = c * mkp - s * mkq
                        v[k, q] = s * mkp + c * mkq
                    for k in range(n):
                        mkp = v[p, k]
                        mkq = v[q, k]
                        v[p, k] = c * mkp - s * mkq
                        v[q, k] = s * mkp + c * mkq
                    v[p, q] = 0.0
                    v[q, p] = 0.0
    return np.sort(np.diag(m)), sweep


def walsh_numerators(signs, int n):
    """``f[d] = sum_S signs[S] * (-1)^{|d & S|}`` for every ``d < 2^n``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] eps = np.asarray(signs, dtype=np.int64)
    cdef Py_ssize_t dim = 1 << n
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(dim, dtype=np.int64)
    cdef Py_ssize_t d, S
    cdef long long acc
    if eps.shape[0] != dim:
        raise ValueError("sign vector length must be 2^n")
    for d in range(dim):
        acc = 0
        for S in range(dim):
            if _popcount(d & S) & 1:
                acc -= eps[S]
            else:
                acc += eps[S]
        out[d] = acc
    return out


def xor_convolution_matrix(f, int n):
    """Matrix ``T[j, k] = f[j ^ k]``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fv = np.asarray(f, dtype=np.int64)
    cdef Py_ssize_t dim = 1 << n
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((dim, dim), dtype=np.int64)
    cdef Py_ssize_t j, k
    for j in range(dim):
        for k in range(dim):
            out[j, k] = fv[j ^ k]
    return out



# --------------------------------------------------------------------------
# fraction-free simplex kernels on int64 with 128-bit intermediates

cdef extern from *:
    """
    typedef __int128 gs_int128;
    """
    ctypedef long long gs_int128

cdef long long I64_MAX = 9223372036854775807
cdef long long I64_MIN = -9223372036854775807 - 1


def bareiss_pivot(long long[:, ::1] m, Py_ssize_t r, long long[::1] alpha, long long det):
    """Return the updated table ``(a_r m_i - a_i m_r) / det`` or ``None`` on overflow.

    Row ``r`` is copied unchanged; the new determinant is ``alpha[r]``.
    """
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t i, k
    cdef gs_int128 acc
    cdef long long ar = alpha[r], ai
    out_arr = np.empty((rows, cols), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    for i in range(rows):
        if i == r:
            for k in range(cols):
                out[i, k] = m[i, k]
            continue
        ai = alpha[i]
        for k in range(cols):
            acc = <gs_int128>ar * m[i, k] - <gs_int128>ai * m[r, k]
            acc = acc / det
            if acc > I64_MAX or acc < I64_MIN:
                return None
            out[i, k] = <long long>acc
    return out_arr


def apply_sparse(long long[:, ::1] m, long long[::1] idx, long long[::1] val):
    """``alpha = adj @ column`` for a sparse column, or ``None`` on overflow."""
    cdef Py_ssize_t rows = m.shape[0], nnz = idx.shape[0]
    cdef Py_ssize_t i, t
    cdef gs_int128 acc
    out_arr = np.empty(rows, dtype=np.int64)
    cdef long long[::1] out = out_arr
    for i in range(rows):
        acc = 0
        for t in range(nnz):
            acc += <gs_int128>m[i, idx[t]] * val[t]
        if acc > I64_MAX or acc < I64_MIN:
            return None
        out[i] = <long long>acc
    return out_arr


def first_positive(long long[::1] indptr, long long[::1] indices, long long[::1] data,
                   long long[::1] y, Py_ssize_t start=0):
    """Index of the first column with ``y . A_j > 0`` (from ``start``), or -1."""
    cdef Py_ssize_t ncols = indptr.shape[0] - 1
    cdef Py_ssize_t j, t
    cdef gs_int128 acc
    for j in range(start, ncols):
        acc = 0
        for t in range(indptr[j], indptr[j + 1]):
            acc += <gs_int128>y[indices[t]] * data[t]
        if acc > 0:
            return j
    return -1
