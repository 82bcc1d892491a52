"""Compiled vs pure-Python kernels.

Times each kernel from ``graphsep._core`` against its ``graphsep._pycore``
twin on identical inputs, checks that the results agree, then times one
end-to-end exact LP under both backends (each in a fresh interpreter,
selected with GRAPHSEP_PURE_PYTHON).

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from graphsep import _pycore

try:
    from graphsep import _core
except ImportError:
    _core = None

END_TO_END = """
import time
from fractions import Fraction
from graphsep import kernels, pptmix
from graphsep.graphs import builtin_graph
from graphsep.states import white_noise
s = white_noise(builtin_graph("Y5"), Fraction(2, 5))
t = time.perf_counter()
cert = pptmix.is_ppt_mixture(s, float_guided=False)
print(kernels.BACKEND, cert.feasible, time.perf_counter() - t)
"""


def cases(rng):
    sym = rng.standard_normal((32, 32))
    sym = (sym + sym.T) / 2
    table = rng.integers(-50, 50, size=(40, 120), dtype=np.int64)
    alpha = rng.integers(-50, 50, size=40, dtype=np.int64)
    alpha[3] = 7
    ncols, nrows = 4000, 64
    nnz = 6
    indptr = np.arange(0, (ncols + 1) * nnz, nnz, dtype=np.int64)
    indices = rng.integers(0, nrows, size=ncols * nnz, dtype=np.int64)
    data = rng.integers(0, 4, size=ncols * nnz, dtype=np.int64)
    y = -np.abs(rng.integers(1, 5, size=nrows, dtype=np.int64))
    signs = [int(v) for v in rng.choice([-1, 1], size=64)]
    return {
        "jacobi_eigvalsh (32x32)": (lambda m: m.jacobi_eigvalsh(sym, 1e-14, 100), lambda a, b: np.allclose(a[0], b[0])),
        "walsh_numerators (n=6)": (lambda m: m.walsh_numerators(signs, 6), lambda a, b: list(a) == list(b)),
        "bareiss_pivot (40x120)": (lambda m: m.bareiss_pivot(table if m is _core else table.tolist(), 3, alpha if m is _core else alpha.tolist(), 1),
                                   lambda a, b: np.array_equal(np.asarray(a), np.asarray(b))),
        "first_positive (4000 cols, none positive)": (lambda m: m.first_positive(indptr, indices, data, y, 0)
                                                      if m is _core else
                                                      m.first_positive(indptr.tolist(), indices.tolist(), data.tolist(), y.tolist(), 0),
                                                      lambda a, b: a == b),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _core is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation`")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':45s} {'compiled':>12s} {'python':>12s} {'speedup':>8s}")
    for name, (fn, same) in cases(rng).items():
        if not same(fn(_core), fn(_pycore)):
            print(f"{name}: results differ")
            return 1
        tc = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat))
        print(f"{name:45s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:7.1f}x")
    print("\nend to end: exact PPT-mixture LP, Y5 white noise at p = 2/5 (infeasible, no float hint)")
    for pure in ("0", "1"):
        env = dict(os.environ, GRAPHSEP_PURE_PYTHON=pure)
        res = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True)
        if res.returncode:
            print(res.stderr)
            return 1
        backend, feasible, secs = res.stdout.split()
        print(f"  {backend:9s} feasible={feasible:5s} {float(secs):8.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
