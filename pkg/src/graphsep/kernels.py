"""Kernel backend selection.

The compiled extension ``graphsep._core`` is used when importable; otherwise,
or when ``GRAPHSEP_PURE_PYTHON=1``, the pure-Python ``graphsep._pycore``.
Integer simplex tables start on int64 and drop to Python integers for the
rest of a solve the first time a value would overflow.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pycore

_bigint = int

if os.environ.get("GRAPHSEP_PURE_PYTHON", "") not in ("", "0"):
    _core = None
else:
    try:
        from . import _core
    except ImportError:  # extension not built
        _core = None

BACKEND = "compiled" if _core is not None else "python"
_impl = _core if _core is not None else _pycore

I64_LIMIT = 2**62


def jacobi_eigvalsh(a, tol: float = 1e-14, max_sweeps: int = 100):
    return _impl.jacobi_eigvalsh(a, tol, max_sweeps)


def walsh_numerators(signs, n: int):
    return _impl.walsh_numerators(signs, n)


def xor_convolution_matrix(f, n: int):
    return _impl.xor_convolution_matrix(f, n)


def _fits(values) -> bool:
    return all(-I64_LIMIT < int(v) < I64_LIMIT for v in values)


def _scaled_floats(y) -> np.ndarray:
    """Float images of (possibly huge) integers, all scaled by one power of two."""
    top = max((abs(int(v)).bit_length() for v in y), default=0)
    shift = max(top - 1000, 0)
    return np.array([float(int(v) >> shift) for v in y])


class SparseColumns:
    """Columns ``{row: int}`` packed in CSC arrays for fast pricing.

    Pricing uses the compiled kernel while ``y`` fits in int64. Otherwise
    a float matrix-vector product ranks the columns and only those whose
    sign is not certain in floating point are re-checked exactly.
    """

    def __init__(self, columns):
        from scipy import sparse

        self.columns = columns
        indptr = [0]
        indices = []
        data = []
        for col in columns:
            for r in sorted(col):
                indices.append(r)
                data.append(col[r])
            indptr.append(len(indices))
        self.indptr = indptr
        self.indices = indices
        self.data = data
        self.nrows = (max(indices) + 1) if indices else 0
        self.compiled = _core is not None and _fits(data)
        if self.compiled:
            self._indptr = np.asarray(indptr, dtype=np.int64)
            self._indices = np.asarray(indices, dtype=np.int64)
            self._data = np.asarray(data, dtype=np.int64)
        fdata = np.asarray([float(v) for v in data])
        shape = (self.nrows, len(columns))
        self._at = sparse.csc_matrix((fdata, indices, indptr), shape=shape).T.tocsr()
        self._abs_at = sparse.csc_matrix((np.abs(fdata), indices, indptr), shape=shape).T.tocsr()

    def __len__(self):
        return len(self.columns)

    def column(self, j):
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def dot(self, y, j: int) -> int:
        lo, hi = self.indptr[j], self.indptr[j + 1]
        return sum(int(y[self.indices[t]]) * self.data[t] for t in range(lo, hi))

    def first_positive(self, y, start: int = 0):
        """First column index ``j >= start`` with ``y . A_j > 0``, else ``None``."""
        if self.compiled and _fits(y):
            j = _core.first_positive(self._indptr, self._indices, self._data,
                                     np.asarray(y, dtype=np.int64), start)
            return None if j < 0 else j
        if len(y) < self.nrows:
            raise ValueError("dual vector shorter than the row count")
        yf = _scaled_floats(y[:self.nrows])
        approx = self._at @ yf
        bound = (self._abs_at @ np.abs(yf)) * 1e-12
        for j in np.flatnonzero(approx > -bound):
            j = int(j)
            if j < start:
                continue
            if approx[j] > bound[j] or self.dot(y, j) > 0:
                return j
        return None


class PivotTable:
    """Fraction-free ``[adj(B) | adj(B) b]`` with ``B^-1 = adj / det``.

    Starts as an int64 array (compiled kernels, 128-bit intermediates) and
    switches to an object array of Python integers on the first overflow.
    """

    def __init__(self, nrows: int, b):
        self.nrows = nrows
        self.det = 1
        rows = [[1 if i == k else 0 for k in range(nrows)] + [int(b[i])] for i in range(nrows)]
        if _core is not None and _fits(b):
            self.m = np.asarray(rows, dtype=np.int64)
            self.native = True
        else:
            self.m = np.array([[_bigint(v) for v in row] for row in rows], dtype=object)
            self.native = False

    def _demote(self):
        self.m = np.array([[_bigint(int(v)) for v in row] for row in self.m], dtype=object)
        self.native = False

    def apply(self, idx, val) -> list:
        if self.native:
            if _fits(val):
                out = _core.apply_sparse(self.m, np.asarray(idx, dtype=np.int64), np.asarray(val, dtype=np.int64))
                if out is not None:
                    return [int(v) for v in out]
            self._demote()
        if len(idx) == 0:
            return [0] * self.nrows
        sub = self.m[:, list(idx)]
        return [int(v) for v in sub.dot(np.array([_bigint(int(v)) for v in val], dtype=object))]

    def pivot(self, r: int, alpha) -> None:
        if self.native:
            if _fits(alpha) and -I64_LIMIT < self.det < I64_LIMIT:
                out = _core.bareiss_pivot(self.m, r, np.asarray(alpha, dtype=np.int64), self.det)
                if out is not None:
                    self.m = out
                    self.det = int(alpha[r])
                    return
            self._demote()
        a = np.array([_bigint(int(v)) for v in alpha], dtype=object)
        ar = _bigint(int(alpha[r]))
        row = self.m[r].copy()
        new = (ar * self.m - np.multiply.outer(a, row)) // _bigint(self.det)
        new[r] = row
        self.m = new
        self.det = int(ar)

    def rhs(self, i: int) -> int:
        return int(self.m[i][self.nrows])

    def row(self, i: int) -> list:
        return [int(v) for v in self.m[i][: self.nrows]]

    def dual(self, rows) -> list:
        """Sum of the ``adj`` rows listed (the scaled phase-one duals)."""
        y = [0] * self.nrows
        for i in rows:
            row = self.m[i]
            for k in range(self.nrows):
                y[k] += int(row[k])
        return y
