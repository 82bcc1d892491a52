import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from graphsep import dense as D
from graphsep.graphs import (Bipartition, Graph, PauliString, all_bipartitions, builtin_graph, canonical_form,
                             cut_rank, gf2_rank, group_element, label_transform_lc, lc_classes, lc_orbit,
                             lc_path, local_complement, pauli_multiply, stabilizer_generator, stabilizer_group,
                             star_graph)

C4 = builtin_graph("C4")


def random_graph(n, bits_):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits_) if b])


graphs = st.integers(2, 5).flatmap(
    lambda n: st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2).map(
        lambda b: random_graph(n, b)))


def test_generators_of_the_four_qubit_cluster():
    assert str(stabilizer_generator(C4, 1)) == "XZ11"
    assert str(stabilizer_generator(C4, 3)) == "1ZXZ"
    assert str(stabilizer_generator(Graph.from_edges(1, []), 1)) == "X"


def test_generator_index_out_of_range():
    with pytest.raises(IndexError):
        stabilizer_generator(C4, 0)
    with pytest.raises(IndexError):
        stabilizer_generator(C4, 5)


def test_single_qubit_pauli_algebra():
    x, z = PauliString.from_string("X"), PauliString.from_string("Z")
    assert str(x * z) == "-iY"
    assert np.allclose(D.pauli_to_dense(x * z), D.pauli_to_dense(x) @ D.pauli_to_dense(z))


def test_generator_squares_to_identity():
    g1 = stabilizer_generator(C4, 1)
    sq = g1 * g1
    assert sq == PauliString.identity(4)


@given(graphs, st.data())
@settings(max_examples=60, deadline=None)
def test_products_match_dense(g, data):
    a = data.draw(st.integers(0, (1 << g.n) - 1))
    b = data.draw(st.integers(0, (1 << g.n) - 1))
    pa, pb = group_element(g, a), group_element(g, b)
    assert np.allclose(D.pauli_to_dense(pauli_multiply(pa, pb)), D.pauli_to_dense(pa) @ D.pauli_to_dense(pb))


def test_group_elements():
    assert group_element(C4, 0) == PauliString.identity(4)
    assert str(group_element(C4, 0b0001)) == "XZ11"
    full = np.eye(16)
    for i in range(1, 5):
        full = full @ D.pauli_to_dense(stabilizer_generator(C4, i))
    assert np.allclose(D.pauli_to_dense(group_element(C4, 0b1111)), full)


@pytest.mark.parametrize("name", ["C4", "GHZ4", "Y5", "C5", "R5"])
def test_stabilizer_group_is_abelian_and_hermitian(name):
    g = builtin_graph(name)
    group = stabilizer_group(g)
    assert len(group) == 1 << g.n
    assert len({(p.x, p.z) for p in group}) == len(group)
    for p in group:
        assert p.is_hermitian
    for i, j in itertools.combinations(range(1, g.n + 1), 2):
        a, b = stabilizer_generator(g, i), stabilizer_generator(g, j)
        assert a * b == b * a


@pytest.mark.parametrize("name", ["C4", "GHZ3", "Y5", "R5"])
def test_graph_state_is_stabilized(name):
    g = builtin_graph(name)
    psi = D.graph_state_amplitudes(g, 0)
    for p in stabilizer_group(g):
        assert np.allclose(D.pauli_to_dense(p) @ psi, psi)


def test_local_complement_examples():
    star = star_graph(4)
    complete = Graph.from_edges(4, list(itertools.combinations(range(1, 5), 2)))
    assert local_complement(star, 1) == complete
    assert local_complement(C4, 2) == Graph.from_edges(4, list(C4.edges) + [(1, 3)])


@given(graphs, st.data())
@settings(max_examples=50, deadline=None)
def test_local_complement_is_an_involution(g, data):
    a = data.draw(st.integers(1, g.n))
    assert local_complement(local_complement(g, a), a) == g


def test_label_transform_examples():
    assert label_transform_lc(C4, 2, 0) == 0
    # sign on qubit 2 flips the signs on its neighbours 1 and 3
    assert label_transform_lc(C4, 2, 0b0010) == 0b0111
    assert label_transform_lc(C4, 2, 0b0001) == 0b0001
    single = Graph.from_edges(1, [])
    assert label_transform_lc(single, 1, 1) == 1
    assert label_transform_lc(single, 1, 0) == 0


def _on(op, q, n):
    m = np.eye(1)
    for i in range(1, n + 1):
        m = np.kron(m, op if i == q else np.eye(2))
    return m


@pytest.mark.parametrize("name", ["C4", "GHZ4", "Y5", "R5"])
def test_label_transform_matches_local_unitary(name):
    """exp(-i pi/4 X_a) prod_b exp(i pi/4 Z_b) maps |G, k> to |LC_a G, k'> up to a phase."""
    x = np.array([[0, 1], [1, 0]])
    z = np.diag([1, -1])
    g = builtin_graph(name)
    for a in range(1, g.n + 1):
        u = expm(-1j * np.pi / 4 * _on(x, a, g.n))
        for b in g.neighbours(a):
            u = u @ expm(1j * np.pi / 4 * _on(z, b, g.n))
        h = local_complement(g, a)
        for k in range(1 << g.n):
            v = u @ D.graph_state_amplitudes(g, k)
            w = D.graph_state_amplitudes(h, label_transform_lc(g, a, k))
            assert abs(abs(np.vdot(w, v)) - 1) < 1e-9


def test_cut_rank_examples():
    assert cut_rank(C4, Bipartition.parse(4, "A|BCD")) == 1
    assert cut_rank(C4, Bipartition.parse(4, "AD|BC")) == 2
    assert cut_rank(builtin_graph("Y5"), Bipartition.parse(5, "ACE|BD")) == 2


@given(graphs, st.data())
@settings(max_examples=40, deadline=None)
def test_cut_rank_is_log_schmidt_rank_and_lc_invariant(g, data):
    m = data.draw(st.sampled_from(all_bipartitions(g.n)))
    r = cut_rank(g, m)
    assert 2 ** r == D.schmidt_rank(g, m)
    a = data.draw(st.integers(1, g.n))
    assert cut_rank(local_complement(g, a), m) == r


def test_schmidt_rank_examples():
    assert D.schmidt_rank(C4, Bipartition.parse(4, "A|BCD")) == 2
    assert D.schmidt_rank(C4, Bipartition.parse(4, "AD|BC")) == 4
    assert D.schmidt_rank(Graph.from_edges(2, []), Bipartition.parse(2, "A|B")) == 1


def test_lc_orbit_of_empty_graph():
    g = Graph.from_edges(4, [])
    assert lc_orbit(g) == {g}


def test_lc_orbit_star_and_complete():
    orbit = lc_orbit(star_graph(4))
    assert Graph.from_edges(4, list(itertools.combinations(range(1, 5), 2))) in orbit
    assert C4 not in orbit


def test_lc_path_reaches_target():
    target = local_complement(local_complement(C4, 2), 3)
    seq = lc_path(C4, target)
    h = C4
    for a in seq:
        h = local_complement(h, a)
    assert h == target
    assert lc_path(C4, star_graph(4)) is None


def test_lc_class_counts():
    # connected graphs up to LC and relabelling: 1, 1, 2, 4 for n = 2..5
    assert [len(lc_classes(n)) for n in (2, 3, 4, 5)] == [1, 1, 2, 4]


def test_canonical_form_is_relabelling_invariant():
    g = builtin_graph("Y5")
    assert canonical_form(g) == canonical_form(g.permuted([5, 3, 1, 2, 4]))


def test_gf2_rank():
    assert gf2_rank([0b11, 0b01, 0b10]) == 2
    assert gf2_rank([]) == 0
    assert gf2_rank([0b100, 0b010, 0b001]) == 3


def test_bipartition_parsing_and_labels():
    m = Bipartition.parse(4, "AD|BC")
    assert m == Bipartition.parse(4, "BC") == Bipartition.parse(4, "14|23")
    assert m.label() == "AD|BC"
    assert len(all_bipartitions(4)) == 7
    assert len(all_bipartitions(5)) == 15
    with pytest.raises(ValueError):
        Bipartition.parse(4, "AB|BC")
    with pytest.raises(ValueError):
        Bipartition(4, 0)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(3, [(1, 4)])
    with pytest.raises(ValueError):
        Graph(9, (0,) * 9)
    with pytest.raises(ValueError):
        builtin_graph("Q3")


def test_builtin_families():
    assert builtin_graph("C4").edges == ((1, 2), (2, 3), (3, 4))
    assert builtin_graph("GHZ4") == star_graph(4)
    assert len(builtin_graph("R5").edges) == 5
    assert builtin_graph("Y5").edges == ((1, 2), (2, 3), (3, 4), (3, 5))
