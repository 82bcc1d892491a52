import json
from fractions import Fraction

import pytest

from graphsep import classify as C
from graphsep import jsonio, pptmix
from graphsep.certificates import verify_decomposition, verify_verdict
from graphsep.graphs import Graph, builtin_graph
from graphsep.states import GraphDiagonalState, white_noise
from graphsep.witnesses import named_witness

C4 = builtin_graph("C4")


def roundtrip(obj):
    return json.loads(jsonio.dumps(obj))


def test_graph_round_trip():
    g = builtin_graph("Y5")
    assert jsonio.graph_from_json(roundtrip(jsonio.graph_to_json(g))) == g
    assert jsonio.graph_from_json("R5") == builtin_graph("R5")


@pytest.mark.parametrize("bad", [{"n": 3}, {"n": "3", "edges": []}, {"n": 3, "edges": [[1]]}, 7])
def test_graph_format_errors(bad):
    with pytest.raises(jsonio.FormatError):
        jsonio.graph_from_json(bad)


def test_state_round_trip():
    s = pptmix.counterexample_state()
    obj = roundtrip(jsonio.state_to_json(s))
    assert all(isinstance(v, str) for v in obj["lambda"].values())
    assert jsonio.state_from_json(obj) == s


def test_state_array_form():
    obj = {"graph": "C4", "lambda_array": ["11/26"] + ["1/26"] * 15}
    assert jsonio.state_from_json(obj) == white_noise(C4, Fraction(5, 13))


def test_state_float_mode():
    obj = {"graph": "C4", "lambda": {"++++": 0.5, "-+++": 0.25, "+-++": 0.25}}
    with pytest.raises(jsonio.FormatError):
        jsonio.state_from_json(obj)
    s = jsonio.state_from_json(obj, allow_float=True)
    assert s.weight("++++") == Fraction(1, 2)
    # decimal reading then renormalization
    s = jsonio.state_from_json({"graph": "C4", "lambda": {"++++": 0.1, "-+++": 0.1}}, allow_float=True)
    assert s.weight("++++") == Fraction(1, 2)


@pytest.mark.parametrize("bad", [
    {"lambda": {}},
    {"graph": "C4"},
    {"graph": "C4", "lambda": {"+++": "1"}},
    {"graph": "C4", "lambda": {"++++": "x"}},
    {"graph": "C4", "lambda": {"++++": True}},
    {"graph": "C4", "lambda_array": ["1"]},
])
def test_state_format_errors(bad):
    with pytest.raises(jsonio.FormatError):
        jsonio.state_from_json(bad)


def test_state_invariant_errors_are_not_format_errors():
    with pytest.raises(ValueError) as info:
        jsonio.state_from_json({"graph": "C4", "lambda": {"++++": "1/2"}})
    assert not isinstance(info.value, jsonio.FormatError)


@pytest.mark.parametrize("name", ["W1", "Y5", "R5", "GHZ4"])
def test_witness_round_trip(name):
    w = named_witness(name)
    assert jsonio.witness_from_json(roundtrip(jsonio.witness_to_json(w))) == w


def test_decomposition_round_trip():
    d = C.decompose_c4(white_noise(C4, Fraction(5, 13)))
    back = jsonio.decomposition_from_json(roundtrip(jsonio.decomposition_to_json(d)))
    assert back == d
    assert verify_decomposition(back).ok


@pytest.mark.parametrize("name,p", [("C4", "5/13"), ("C4", "1/2"), ("Y5", "2/5"), ("R5", "7/19")])
def test_verdict_round_trip(name, p):
    s = white_noise(builtin_graph(name), Fraction(p))
    v = C.classify(s)
    back = jsonio.verdict_from_json(roundtrip(jsonio.verdict_to_json(v)))
    assert back.verdict == v.verdict
    assert verify_verdict(back, s)


def test_lp_certificate_json():
    s = white_noise(C4, Fraction(5, 13))
    obj = jsonio.lp_certificate_to_json(pptmix.is_ppt_mixture(s))
    assert obj["feasible"] is True and obj["components"]
    obj = jsonio.lp_certificate_to_json(pptmix.is_ppt_mixture(white_noise(C4, Fraction(1, 2))))
    assert obj["feasible"] is False and obj["y"] and obj["parts"]
    assert Fraction(obj["value"]) < 0


def test_output_is_deterministic():
    s = GraphDiagonalState.uniform(Graph.from_edges(3, [(1, 2), (2, 3)]))
    a = jsonio.dumps(jsonio.verdict_to_json(C.classify(s)))
    b = jsonio.dumps(jsonio.verdict_to_json(C.classify(s)))
    assert a == b
