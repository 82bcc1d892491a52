from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphsep import dense as D
from graphsep.graphs import Bipartition, Graph, PauliString, builtin_graph
from graphsep.pptmix import counterexample_state
from graphsep.states import GraphDiagonalState, white_noise

C4 = builtin_graph("C4")


def test_pauli_to_dense_examples():
    assert np.allclose(D.pauli_to_dense(PauliString.from_string("X")), [[0, 1], [1, 0]])
    assert np.allclose(D.pauli_to_dense(PauliString.identity(3)), np.eye(8))
    assert np.allclose(D.pauli_to_dense(PauliString.from_string("Y")), [[0, -1j], [1j, 0]])


def test_qubit_one_is_the_most_significant_index():
    zi = D.pauli_to_dense(PauliString.from_string("Z1"))
    assert np.allclose(np.diag(zi), [1, 1, -1, -1])


def test_state_to_dense_examples():
    pure = D.state_to_dense(GraphDiagonalState.point_mass(C4, 0))
    assert np.isclose(np.trace(pure), 1)
    assert D.matrix_rank(pure) == 1
    assert np.allclose(D.state_to_dense(GraphDiagonalState.uniform(C4)), np.eye(16) / 16)
    rho = D.state_to_dense(white_noise(C4, Fraction(5, 13)))
    psi = D.graph_state_amplitudes(C4)
    assert np.isclose(np.vdot(psi, rho @ psi).real, 11 / 26)


def test_exact_matrix_matches_float():
    s = white_noise(builtin_graph("GHZ3"), Fraction(1, 3))
    exact = np.array([[float(x) for x in row] for row in D.exact_state_matrix(s)])
    assert np.allclose(exact, D.state_to_dense(s))


def test_partial_transpose_examples():
    m = Bipartition.parse(4, "AD|BC")
    assert np.allclose(D.partial_transpose(np.eye(16), m), np.eye(16))
    rho = D.state_to_dense(white_noise(C4, Fraction(1, 3)))
    assert np.allclose(D.partial_transpose(D.partial_transpose(rho, m), m), rho)
    bell = np.zeros(4)
    bell[0] = bell[3] = 2 ** -0.5
    pt = D.partial_transpose(np.outer(bell, bell), Bipartition.parse(2, "A|B"))
    assert np.isclose(D.min_eigenvalue(pt), -0.5)


def test_min_eigenvalue_examples():
    assert np.isclose(D.min_eigenvalue(np.eye(4)), 1)
    assert np.isclose(D.min_eigenvalue(np.diag([3.0, -2.0])), -2)


def test_min_eigenvalue_rejects_non_hermitian():
    with pytest.raises(ValueError):
        D.min_eigenvalue(np.array([[0, 1], [0, 0]]))


@given(st.integers(2, 24), st.integers(0, 2**31), st.booleans())
@settings(max_examples=40, deadline=None)
def test_jacobi_matches_lapack(dim, seed, complex_):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim))
    if complex_:
        a = a + 1j * rng.standard_normal((dim, dim))
    h = (a + a.conj().T) / 2
    assert np.allclose(D.eigenvalues(h), np.linalg.eigvalsh(h), atol=1e-10)


def test_is_ppt_examples():
    assert D.is_ppt(counterexample_state(), Bipartition.parse(4, "AD|BC"))
    assert not D.is_ppt(GraphDiagonalState.point_mass(C4, 0), Bipartition.parse(4, "A|BCD"))
    for text in ("A|BCD", "AB|CD", "AD|BC"):
        assert D.is_ppt(GraphDiagonalState.uniform(C4), Bipartition.parse(4, text))


def test_partial_trace_and_rank():
    pure = D.state_to_dense(GraphDiagonalState.point_mass(C4, 0))
    m = Bipartition.parse(4, "AD|BC")
    red = D.partial_trace(pure, m.mask, 4)
    assert red.shape == (4, 4)
    assert np.isclose(np.trace(red), 1)
    assert D.matrix_rank(red) == 4
    assert D.matrix_rank(D.partial_trace(pure, Bipartition.parse(4, "A|BCD").mask, 4)) == 2


def test_size_limits():
    with pytest.raises(ValueError):
        D.state_to_dense(white_noise(Graph.from_edges(7, [(1, 2)]), 0))
