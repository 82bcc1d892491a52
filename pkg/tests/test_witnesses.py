from fractions import Fraction

import numpy as np
import pytest

from graphsep import dense as D
from graphsep.classify import lemma2_separable_pair
from graphsep.graphs import builtin_graph, star_graph
from graphsep.states import GraphDiagonalState, white_noise
from graphsep.witnesses import (DiagonalWitness, c5_witness, fidelity_witness, ghz_witness, named_witness,
                                r5_witness, rotations, translation_sum, validate_witness, w1_family, w1_witness,
                                w2_family, w2_witness, y5_witness)

C4 = builtin_graph("C4")


def test_w1_examples():
    w = w1_witness()
    assert w.evaluate(GraphDiagonalState.point_mass(C4, 0)) == Fraction(-1, 2)
    assert w.evaluate(white_noise(C4, Fraction(5, 13))) == 0
    assert w.evaluate(GraphDiagonalState.uniform(C4)) == Fraction(5, 16)
    assert w.evaluate(white_noise(C4, Fraction(1, 2))) < 0


def test_w2_examples():
    w = w2_witness()
    s = GraphDiagonalState.from_labels(C4, {"++++": "1/2", "-++-": "1/2"})
    assert w.evaluate(s) == Fraction(-1, 2)
    assert w.evaluate(GraphDiagonalState.uniform(C4)) == Fraction(3, 8)


def test_w2_nonnegative_on_lemma2_pairs():
    for w in w2_family():
        for k1 in range(16):
            for k2 in range(k1 + 1, 16):
                if lemma2_separable_pair(k1, k2) is None:
                    continue
                s = GraphDiagonalState.from_labels(C4, {k1: "1/2", k2: "1/2"})
                assert w.evaluate(s) >= 0


def test_uniform_gives_mean_coefficient():
    for w in (w1_witness(), y5_witness(), c5_witness(), r5_witness()):
        s = GraphDiagonalState.uniform(w.graph)
        assert w.evaluate(s) == sum(w.coeffs) / len(w.coeffs)


@pytest.mark.parametrize("w", [w1_witness(), w2_witness(), w2_witness(None, 5, "-+"), w1_witness(None, "+-+-")],
                         ids=lambda w: w.name)
def test_c4_witnesses_valid(w):
    assert validate_witness(w).valid


def test_all_c4_witness_sign_choices_valid():
    assert all(validate_witness(w).valid for w in w1_family())
    assert all(validate_witness(w).valid for w in w2_family()[::7])


@pytest.mark.parametrize("factory", [y5_witness, c5_witness, r5_witness], ids=["Y5", "C5", "R5"])
def test_five_qubit_witnesses_valid(factory):
    rep = validate_witness(factory(), dense=True)
    assert rep.valid
    assert rep.max_dense_deviation < 1e-10


def test_negative_projector_is_invalid():
    c = [Fraction(0)] * 16
    c[0] = Fraction(-1)
    rep = validate_witness(DiagonalWitness(C4, tuple(c)))
    assert not rep.valid
    assert rep.violations


def test_fidelity_witness_valid_everywhere():
    for name in ("C4", "Y5", "R5", "GHZ3"):
        assert validate_witness(fidelity_witness(builtin_graph(name))).valid


@pytest.mark.parametrize("name,p", [("Y5", "9/25"), ("C5", "9/25"), ("R5", "7/19")])
def test_five_qubit_witnesses_vanish_at_threshold(name, p):
    w = named_witness(name)
    g = builtin_graph(name)
    assert w.evaluate(white_noise(g, Fraction(p))) == 0
    assert w.evaluate(white_noise(g, Fraction(p) + Fraction(1, 10**6))) < 0
    assert w.evaluate(white_noise(g, Fraction(p) - Fraction(1, 10**6))) > 0


def test_r5_rescaling():
    w, r = r5_witness(), r5_witness(rescaled=True)
    u = GraphDiagonalState.uniform(builtin_graph("R5"))
    assert w.evaluate(u) == Fraction(7, 4)
    assert r.evaluate(u) == 1
    assert validate_witness(r).valid


def test_ghz_examples():
    w = ghz_witness(n=4)
    g = star_graph(4)
    assert w.evaluate(GraphDiagonalState.point_mass(g, 0)) == Fraction(-1, 2)
    half = GraphDiagonalState(g, (Fraction(1, 2),) + (Fraction(1, 30),) * 15)
    assert w.evaluate(half) == 0
    assert ghz_witness(n=3).evaluate(GraphDiagonalState.uniform(star_graph(3))) == Fraction(3, 8)
    assert validate_witness(w).valid
    with pytest.raises(ValueError):
        ghz_witness(C4)


def test_translation_helpers():
    assert sorted(rotations(0b00001, 5)) == [1, 2, 4, 8, 16]
    assert sum(translation_sum(5, "+++++")) == 5
    assert translation_sum(5, "-----")[31] == 5


def test_witness_dense_operator_is_consistent():
    w = w1_witness()
    op = D.diagonal_operator(C4, w.coeffs)
    rho = D.state_to_dense(white_noise(C4, Fraction(1, 2)))
    assert np.isclose(np.trace(op @ rho).real, float(w.evaluate(white_noise(C4, Fraction(1, 2)))))


def test_witness_errors():
    with pytest.raises(ValueError):
        w1_witness(builtin_graph("Y5"))
    with pytest.raises(ValueError):
        named_witness("nope")
    with pytest.raises(ValueError):
        w1_witness().scaled(-1)
    with pytest.raises(ValueError):
        w1_witness().evaluate(white_noise(builtin_graph("Y5"), 0))
