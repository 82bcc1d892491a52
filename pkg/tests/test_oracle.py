from fractions import Fraction

import pytest

from graphsep import pptmix
from graphsep.graphs import Graph, builtin_graph
from graphsep.oracle import crosscheck
from graphsep.states import white_noise
from graphsep.witnesses import named_witness


@pytest.mark.parametrize("name", ["C4", "GHZ4", "Y5", "C5", "R5", "GHZ3"])
def test_builtin_graphs_pass(name):
    report = crosscheck(builtin_graph(name), seed=3)
    assert report.ok, report.as_dict()
    assert report.max_deviation < 1e-10


def test_state_and_witness_input():
    s = white_noise(builtin_graph("R5"), Fraction(2, 5))
    report = crosscheck(s, [named_witness("R5")])
    assert report.ok
    assert report.witness_checks[0]["valid"]


def test_tampered_transfer_matrix_is_reported():
    def tampered(g, m):
        tm = pptmix.transfer_matrix(g, m)
        f = list(tm.f)
        f[1] += 1
        return pptmix.TransferMatrix(g, m, tuple(f))

    report = crosscheck(builtin_graph("C4"), transfer=tampered)
    assert not report.ok
    assert report.mismatches
    assert report.max_deviation > 1e-3


def test_seven_qubits_give_a_clean_error():
    g = Graph.from_edges(7, [(i, i + 1) for i in range(1, 7)])
    with pytest.raises(ValueError, match="n <= 6"):
        crosscheck(g)
