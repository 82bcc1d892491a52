from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from graphsep.lp import check_farkas, check_solution, scale_to_integers, solve_feasibility


def dense_columns(a):
    return [{i: int(a[i][j]) for i in range(len(a)) if a[i][j]} for j in range(len(a[0]))]


def test_simple_feasible():
    cols = [{0: 1}, {1: 1}, {0: 1, 1: 1}]
    res = solve_feasibility(cols, [Fraction(1, 3), Fraction(2, 3)], 2)
    assert res.feasible
    assert check_solution(cols, [Fraction(1, 3), Fraction(2, 3)], res.solution)


def test_simple_infeasible():
    cols = [{0: 1, 1: 1}]
    b = [Fraction(1), Fraction(2)]
    res = solve_feasibility(cols, b, 2)
    assert not res.feasible
    assert check_farkas(cols, b, res.farkas)


def test_zero_rhs_is_feasible():
    res = solve_feasibility([{0: 1}], [0], 1)
    assert res.feasible and res.solution == {}


def test_rejects_negative_rhs():
    with pytest.raises(ValueError):
        solve_feasibility([{0: 1}], [-1], 1)
    with pytest.raises(ValueError):
        solve_feasibility([{0: 1}], [1, 1], 1)


def test_scale_to_integers():
    assert scale_to_integers([Fraction(1, 2), Fraction(1, 3)]) == ([3, 2], 6)


def test_degenerate_problem_terminates():
    # many identical and dependent columns; Bland's rule must not cycle
    cols = [{0: 1, 1: 1}, {0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: 1}, {0: 2, 1: 2, 2: 2}, {2: 1}]
    res = solve_feasibility(cols, [0, 0, 1], 3)
    assert res.feasible
    assert check_solution(cols, [0, 0, 1], res.solution)


@given(st.integers(2, 6), st.integers(2, 12), st.integers(0, 2**31), st.booleans())
@settings(max_examples=120, deadline=None)
def test_agrees_with_highs(m, n, seed, guided):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(m, n))
    b = [Fraction(int(v), int(rng.integers(1, 5))) for v in rng.integers(0, 6, size=m)]
    cols = dense_columns(a)
    res = solve_feasibility(cols, b, m, float_guided=guided)
    ref = linprog(np.zeros(n), A_eq=a, b_eq=[float(x) for x in b], bounds=(0, None), method="highs")
    if res.feasible:
        assert check_solution(cols, b, res.solution)
        assert ref.status == 0
    else:
        assert check_farkas(cols, b, res.farkas)
        assert ref.status == 2


def test_warm_start_gives_same_answer():
    cols = [{0: 1, 1: 1}, {0: 1}, {1: 1}, {0: 2, 1: 1}]
    b = [Fraction(3), Fraction(2)]
    for start in ([], [3], [0, 1], [2, 3]):
        res = solve_feasibility(cols, b, 2, start_basis=start)
        assert res.feasible and check_solution(cols, b, res.solution)


def test_large_entries_switch_to_big_integers():
    big = 3**40
    cols = [{0: big, 1: 1}, {0: 1, 1: big}, {0: big - 1, 1: big + 1}]
    b = [Fraction(big + 1), Fraction(big + 1)]
    res = solve_feasibility(cols, b, 2)
    assert res.feasible and check_solution(cols, b, res.solution)


def test_certificate_checks_reject_bad_input():
    cols = [{0: 1}, {1: 1}]
    b = [1, 1]
    assert not check_solution(cols, b, {0: Fraction(1)})
    assert not check_solution(cols, b, {0: Fraction(-1), 1: Fraction(1)})
    assert not check_farkas(cols, b, [1, 1])
    assert not check_farkas(cols, b, [-1, 1])
