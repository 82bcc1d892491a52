import json
import subprocess
import sys
from fractions import Fraction

import pytest

from graphsep import jsonio
from graphsep.certificates import verify_verdict
from graphsep.cli import main
from graphsep.graphs import builtin_graph
from graphsep.pptmix import counterexample_state
from graphsep.states import white_noise


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


@pytest.mark.parametrize("p,verdict,code", [("5/13", "BISEPARABLE", 0), ("1", "GME", 1)])
def test_classify_c4(capsys, p, verdict, code):
    rc, out, _ = run(capsys, "classify", "--builtin", "C4", "--white-noise", p)
    assert rc == code
    assert out["verdict"] == verdict
    s = white_noise(builtin_graph("C4"), Fraction(p))
    assert verify_verdict(jsonio.verdict_from_json(out), s)


def test_classify_r5_decimal(capsys):
    rc, out, _ = run(capsys, "classify", "--builtin", "R5", "--white-noise", "0.40")
    assert rc == 1 and out["verdict"] == "GME"
    assert out["threshold"] == "7/19"


def test_classify_c6_inconclusive(capsys):
    rc, out, _ = run(capsys, "classify", "--builtin", "C6", "--white-noise", "27/100")
    assert rc == 2 and out["verdict"] == "INCONCLUSIVE"
    assert out["threshold"] == ["11/43", "51/179"]


def test_classify_state_file_and_emit(tmp_path, capsys):
    state = tmp_path / "state.json"
    state.write_text(jsonio.dumps(jsonio.state_to_json(counterexample_state())))
    dec = tmp_path / "dec.json"
    rc, out, _ = run(capsys, "classify", "--state", str(state), "--emit-decomposition", str(dec))
    assert rc == 0
    d = jsonio.decomposition_from_json(json.loads(dec.read_text()))
    assert d.state == counterexample_state()


def test_classify_emit_witness_and_reuse(tmp_path, capsys):
    wfile = tmp_path / "w.json"
    rc, _, _ = run(capsys, "classify", "--builtin", "Y5", "--white-noise", "2/5", "--emit-witness", str(wfile))
    assert rc == 1
    state = tmp_path / "s.json"
    state.write_text(jsonio.dumps(jsonio.state_to_json(white_noise(builtin_graph("Y5"), Fraction(2, 5)))))
    rc, out, _ = run(capsys, "witness", "--file", str(wfile), "--state", str(state))
    assert rc == 1 and out["valid"] and Fraction(out["value"]) < 0


def test_classify_oracle_flag(capsys):
    rc, out, _ = run(capsys, "classify", "--builtin", "C4", "--white-noise", "1/2", "--oracle")
    assert rc == 1
    assert out["oracle"]["ok"] and out["oracle"]["max_deviation"] < 1e-10


def test_restrict_1bp_flag(capsys):
    rc, out, _ = run(capsys, "classify", "--builtin", "C4", "--white-noise", "1/3", "--restrict-1bp")
    assert rc == 0


def test_threshold_command(capsys):
    assert run(capsys, "threshold", "C4")[1]["threshold"] == "5/13"
    assert run(capsys, "threshold", "C6")[1]["threshold"] == ["11/43", "51/179"]
    rc, out, _ = run(capsys, "threshold", "Y5", "--sweep", "4")
    assert out["threshold"] == "9/25"
    assert [row["verdict"] for row in out["sweep"]] == ["BISEPARABLE", "BISEPARABLE", "GME", "GME", "GME"]


def test_threshold_unsupported(capsys):
    rc, _, err = run(capsys, "threshold", "nonsense")
    assert rc == 64 and "error" in err


def test_decompose_command(capsys):
    rc, out, _ = run(capsys, "decompose", "--builtin", "R5", "--white-noise", "7/19")
    assert rc == 0 and out["terms"] and out["tags"]
    rc, out, _ = run(capsys, "decompose", "--builtin", "R5", "--white-noise", "2/5")
    assert rc == 1 and "error" in out


def test_witness_command(capsys, tmp_path):
    rc, out, _ = run(capsys, "witness", "W1")
    assert rc == 0 and out["valid"]
    rc, out, _ = run(capsys, "witness", "R5", "--builtin", "R5", "--white-noise", "7/19")
    assert rc == 2 and out["value"] == "0"
    rc, out, _ = run(capsys, "witness", "C5", "--builtin", "C5", "--white-noise", "1/2", "--oracle")
    assert rc == 1 and out["oracle"]["max_deviation"] < 1e-10
    rc, _, _ = run(capsys, "witness", "W1", "--builtin", "Y5", "--white-noise", "1/2")
    assert rc == 65


def test_pptmix_command(capsys, tmp_path):
    lp = tmp_path / "c4.lp"
    rc, out, _ = run(capsys, "pptmix", "--builtin", "C4", "--white-noise", "5/13", "--export-lp", str(lp))
    assert rc == 2 and out["ppt_mixture"] and out["certificate"]["feasible"]
    assert lp.read_text().startswith("\\ PPT-mixture")
    rc, out, _ = run(capsys, "pptmix", "--builtin", "C4", "--white-noise", "1/2")
    assert rc == 1 and not out["ppt_mixture"] and Fraction(out["value"]) < 0


def test_graph_command(capsys):
    rc, out, _ = run(capsys, "graph", "--builtin", "C4")
    assert rc == 0
    assert out["generators"][0] == "XZ11"
    assert out["cut_ranks"]["AD|BC"] == 2
    rc, out, _ = run(capsys, "graph", "--builtin", "GHZ4", "--oracle")
    assert out["oracle"]["ok"]


@pytest.mark.parametrize("argv", [
    ["classify"],
    ["classify", "--builtin", "C4"],
    ["classify", "--bogus"],
    ["frobnicate"],
    [],
    ["classify", "--builtin", "Q9", "--white-noise", "1"],
    ["classify", "--builtin", "C4", "--white-noise", "abc"],
])
def test_usage_errors_exit_64(capsys, argv):
    assert main(argv) == 64


def test_malformed_json_exit_64(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["classify", "--state", str(bad)]) == 64
    bad.write_text(json.dumps({"graph": "C4", "lambda": {"++++": 1.0}}))
    assert main(["classify", "--state", str(bad)]) == 64


def test_float_mode(tmp_path, capsys):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"graph": "C4", "lambda": {"++++": 0.5, "-++-": 0.5}}))
    rc, out, _ = run(capsys, "classify", "--state", str(f), "--float")
    assert rc == 1


@pytest.mark.parametrize("state", [
    {"graph": "C4", "lambda": {"++++": "1/2"}},
    {"graph": "C4", "lambda": {"++++": "3/2", "-+++": "-1/2"}},
])
def test_invariant_violations_exit_65(tmp_path, capsys, state):
    f = tmp_path / "s.json"
    f.write_text(json.dumps(state))
    assert main(["classify", "--state", str(f)]) == 65


def test_qubit_cap_and_oracle_size(capsys, monkeypatch):
    monkeypatch.setenv("GRAPHSEP_MAX_QUBITS", "4")
    assert main(["classify", "--builtin", "Y5", "--white-noise", "1/2"]) == 65
    assert main(["graph", "--builtin", "C7", "--oracle"]) == 65


def test_white_noise_out_of_range(capsys):
    assert main(["classify", "--builtin", "C4", "--white-noise", "3/2"]) == 65


def test_output_is_byte_identical(capsys):
    main(["classify", "--builtin", "Y5", "--white-noise", "9/25"])
    a = capsys.readouterr().out
    main(["classify", "--builtin", "Y5", "--white-noise", "9/25"])
    b = capsys.readouterr().out
    assert a == b


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "graphsep.cli", "classify", "--builtin", "C4", "--white-noise", "1"],
                         capture_output=True, text=True)
    assert out.returncode == 1
    assert json.loads(out.stdout)["verdict"] == "GME"
