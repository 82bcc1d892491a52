"""Exact feasibility LPs ``A z = b, z >= 0`` over the integers.

Revised simplex, phase one, Bland's rule. The basis inverse is carried in
fraction-free form: ``adj / det`` with integer ``adj`` (Bareiss-style
updates), so every quantity stays an exact integer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from . import kernels

log = logging.getLogger(__name__)


class LpError(RuntimeError):
    pass


@dataclass
class LpResult:
    feasible: bool
    # feasible: column index -> exact value (only nonzero entries)
    solution: dict = field(default_factory=dict)
    # infeasible: Farkas vector f with f.A_j >= 0 for all j and f.b < 0
    farkas: list = field(default_factory=list)
    pivots: int = 0


def scale_to_integers(values) -> tuple:
    """Common-denominator integer vector and the denominator."""
    fr = [Fraction(v) for v in values]
    den = 1
    for v in fr:
        den = lcm(den, v.denominator)
    return [int(v * den) for v in fr], den


def float_hint(cols: kernels.SparseColumns, b, nrows: int):
    """Floating-point phase one (HiGHS dual simplex) used only as a hint.

    Returns ``("farkas", f)`` with a candidate rational Farkas vector, or
    ``("basis", columns)`` with the support of an approximate solution, or
    ``None`` when the float solver fails. Nothing returned here is trusted:
    Farkas candidates are checked exactly and bases only seed the exact
    simplex.
    """
    import numpy as np
    from scipy import sparse
    from scipy.optimize import linprog

    ncols = len(cols)
    a = sparse.csc_matrix(
        ([float(v) for v in cols.data], cols.indices, cols.indptr), shape=(nrows, ncols)
    )
    full = sparse.hstack([a, sparse.identity(nrows, format="csc")]).tocsc()
    cost = np.r_[np.zeros(ncols), np.ones(nrows)]
    bf = np.array([float(v) for v in b])
    try:
        res = linprog(cost, A_eq=full, b_eq=bf, bounds=(0, None), method="highs-ds")
    except ValueError:  # pragma: no cover - solver rejected the input
        return None
    if res.status != 0:
        return None
    scale = max(1.0, float(np.max(np.abs(bf), initial=0.0)))
    if res.fun > 1e-9 * scale:
        y = res.eqlin.marginals
        return "farkas", [-Fraction(float(v)).limit_denominator(HINT_DENOMINATOR) for v in y]
    z = res.x[:ncols]
    order = np.argsort(-z)
    return "basis", [int(j) for j in order if z[j] > 1e-12]


HINT_DENOMINATOR = 1 << 20


def farkas_holds(cols: kernels.SparseColumns, b, farkas) -> bool:
    """Exact check of ``f . b < 0`` and ``f . A_j >= 0`` for every column."""
    fint, _ = scale_to_integers(farkas)
    if sum(f * Fraction(v) for f, v in zip(fint, b)) >= 0:
        return False
    return cols.first_positive([-v for v in fint]) is None


def solve_feasibility(columns, b, nrows: int, max_pivots: int = 200000, start_basis=None,
                      float_guided: bool = False) -> LpResult:
    """Decide ``A z = b, z >= 0``.

    ``columns`` is a list of sparse integer columns ``{row: value}``; ``b`` a
    list of nonnegative rationals. ``start_basis`` optionally names columns
    to try to pivot in first (a warm start; any subset is allowed).
    ``float_guided`` first asks a floating-point solver for a hint; an
    infeasibility hint is accepted only after an exact Farkas check, and a
    feasibility hint only warm-starts the exact simplex.
    """
    bint, bden = scale_to_integers(b)
    if len(bint) != nrows:
        raise ValueError("right-hand side length differs from row count")
    if any(v < 0 for v in bint):
        raise ValueError("phase one expects b >= 0")
    cols = columns if isinstance(columns, kernels.SparseColumns) else kernels.SparseColumns(columns)
    if float_guided:
        hint = float_hint(cols, b, nrows)
        if hint is not None and hint[0] == "farkas":
            g = 0
            fint, _ = scale_to_integers(hint[1])
            for v in fint:
                g = gcd(g, v)
            farkas = [Fraction(v // g) for v in fint] if g else []
            if farkas and farkas_holds(cols, b, farkas):
                return LpResult(False, farkas=farkas, pivots=0)
            log.info("float Farkas hint rejected; falling back to exact simplex")
        elif hint is not None and start_basis is None:
            start_basis = hint[1]
    # basis entries: j >= 0 structural column, -1 - i artificial of row i
    basis = [-1 - i for i in range(nrows)]
    tab = kernels.PivotTable(nrows, bint)
    pivots = 0

    def column_alpha(j):
        return tab.apply(*cols.column(j))

    def ratio_row(alpha):
        best = None
        for i in range(nrows):
            a = alpha[i]
            if a <= 0:
                continue
            beta = tab.rhs(i)
            if best is None:
                best = (i, beta, a)
                continue
            _, bb, ba = best
            lhs, rhs = beta * ba, bb * a
            if lhs < rhs or (lhs == rhs and _bland_key(basis[i]) < _bland_key(basis[best[0]])):
                best = (i, beta, a)
        return None if best is None else best[0]

    if start_basis:
        for j in start_basis:
            if j in basis:
                continue
            alpha = column_alpha(j)
            # only replace artificials already at zero or keep feasibility via ratio test
            r = ratio_row(alpha)
            if r is None or basis[r] >= 0:
                continue
            tab.pivot(r, alpha)
            basis[r] = j
            pivots += 1

    y = None
    while True:
        art_rows = [i for i in range(nrows) if basis[i] < 0]
        if not art_rows or all(tab.rhs(i) == 0 for i in art_rows):
            sol = {}
            for i, j in enumerate(basis):
                if j >= 0:
                    v = Fraction(tab.rhs(i), tab.det * bden)
                    if v:
                        sol[j] = v
            return LpResult(True, solution=sol, pivots=pivots)
        if y is None:
            y = tab.dual(art_rows)  # scaled by det
        entering = cols.first_positive(y)
        if entering is None:
            g = 0
            for v in y:
                g = gcd(g, v)
            farkas = [Fraction(-v // g) for v in y]
            return LpResult(False, farkas=farkas, pivots=pivots)
        alpha = column_alpha(entering)
        r = ratio_row(alpha)
        if r is None:
            raise LpError("phase-one objective is bounded below; unbounded ray is impossible")
        y = _next_dual(y, tab.row(r), alpha, r, art_rows, basis[r] < 0, tab.det)
        tab.pivot(r, alpha)
        basis[r] = entering
        pivots += 1
        if pivots > max_pivots:
            raise LpError(f"exceeded {max_pivots} pivots")


def _next_dual(y, row_r, alpha, r, art_rows, leaving_artificial, det):
    """Phase-one dual after pivoting on row ``r``, without re-summing rows.

    With ``m_i' = (alpha_r m_i - alpha_i m_r) / det`` for ``i != r`` the new
    dual is the same combination of the old rows; the division is exact.
    """
    ar = int(alpha[r])
    if leaving_artificial:
        base = [v - m for v, m in zip(y, row_r)]
        sa = sum(int(alpha[i]) for i in art_rows if i != r)
    else:
        base = y
        sa = sum(int(alpha[i]) for i in art_rows)
    return [(ar * v - sa * m) // det for v, m in zip(base, row_r)]


def _bland_key(var: int) -> tuple:
    # artificials leave first, then structural columns by index
    return (0, -var) if var < 0 else (1, var)


def check_solution(columns, b, solution) -> bool:
    nrows = len(b)
    acc = [Fraction(0)] * nrows
    for j, v in solution.items():
        if v < 0:
            return False
        for r, a in columns[j].items():
            acc[r] += a * v
    return all(acc[i] == Fraction(b[i]) for i in range(nrows))


def check_farkas(columns, b, farkas) -> bool:
    if sum(Fraction(f) * Fraction(v) for f, v in zip(farkas, b)) >= 0:
        return False
    f, _ = scale_to_integers(farkas)
    return all(sum(f[r] * a for r, a in col.items()) >= 0 for col in columns)
