import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphsep import _pycore, kernels

try:
    from graphsep import _core
except ImportError:  # pragma: no cover - extension not built
    _core = None

compiled = pytest.mark.skipif(_core is None, reason="compiled extension not built")


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_python_switch():
    env = dict(os.environ, GRAPHSEP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from graphsep import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@compiled
@given(st.integers(1, 5), st.data())
@settings(max_examples=40, deadline=None)
def test_walsh_and_xor_matrix_agree(n, data):
    signs = data.draw(st.lists(st.sampled_from([-1, 1]), min_size=1 << n, max_size=1 << n))
    a = _core.walsh_numerators(signs, n)
    b = _pycore.walsh_numerators(signs, n)
    assert list(a) == list(b)
    f = [int(v) for v in a]
    assert np.array_equal(np.asarray(_core.xor_convolution_matrix(f, n)),
                          np.asarray(_pycore.xor_convolution_matrix(f, n)))


@compiled
@given(st.integers(1, 20), st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_jacobi_agree(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    a = (a + a.T) / 2
    assert np.allclose(_core.jacobi_eigvalsh(a)[0], _pycore.jacobi_eigvalsh(a)[0], atol=1e-10)


@compiled
@given(st.integers(2, 8), st.integers(2, 10), st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_bareiss_pivot_agree(rows, cols, seed):
    rng = np.random.default_rng(seed)
    m = rng.integers(-20, 20, size=(rows, cols), dtype=np.int64)
    alpha = rng.integers(-20, 20, size=rows, dtype=np.int64)
    r = int(rng.integers(0, rows))
    alpha[r] = int(rng.integers(1, 9))
    det = 1
    got = _core.bareiss_pivot(m, r, alpha, det)
    want = _pycore.bareiss_pivot(m.tolist(), r, alpha.tolist(), det)
    assert np.array_equal(got, np.array(want))


@compiled
def test_bareiss_overflow_is_reported():
    m = np.array([[2**62, 1], [1, 2**62]], dtype=np.int64)
    alpha = np.array([2**62, 3], dtype=np.int64)
    assert _core.bareiss_pivot(m, 0, alpha, 1) is None


@compiled
@given(st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_first_positive_agree(seed):
    rng = np.random.default_rng(seed)
    ncols, nrows, nnz = 50, 8, 3
    indptr = np.arange(0, (ncols + 1) * nnz, nnz, dtype=np.int64)
    indices = rng.integers(0, nrows, size=ncols * nnz, dtype=np.int64)
    data = rng.integers(-3, 4, size=ncols * nnz, dtype=np.int64)
    y = rng.integers(-5, 3, size=nrows, dtype=np.int64)
    start = int(rng.integers(0, ncols))
    assert _core.first_positive(indptr, indices, data, y, start) == _pycore.first_positive(
        indptr.tolist(), indices.tolist(), data.tolist(), y.tolist(), start)


def test_sparse_columns_pricing_with_huge_duals():
    # y . A_0 = +-1 after cancelling 10^40-sized terms, beyond float resolution
    big = 10**40
    cols = kernels.SparseColumns([{0: 1, 1: -1}, {0: -1, 1: -1}])
    assert cols.first_positive([big + 1, big]) == 0
    assert cols.first_positive([big, big + 1]) is None
