import io
import json

import pytest

from qfusion.circuit import parse
from qfusion.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def plus_circuit(tmp_path):
    doc = {
        "wires": [{"id": "q", "dim": 2}],
        "ops": [{"type": "prep", "wire": "q", "value": 0}, {"type": "gate", "name": "H", "targets": ["q"]},
                {"type": "measure", "wire": "q", "cbit": "m"}],
        "outputs": [], "classical_outputs": ["m"],
    }
    path = tmp_path / "plus.json"
    path.write_text(json.dumps(doc))
    return path


def test_verify_all_pass():
    code, text = run("verify")
    rows = [l for l in text.splitlines() if l.endswith("PASS")]
    assert code == 0 and len(rows) >= 45
    assert "FAIL" not in text


def test_verify_filter():
    code, text = run("verify", "--filter", "eq3")
    body = text.splitlines()[1:-1]
    assert code == 0 and body and all(l.startswith("eq3") for l in body)
    code, text = run("verify", "--filter", "")
    assert code == 0 and text.splitlines()[-1] == "0 passed, 0 failed"


def test_verify_is_deterministic():
    assert run("verify") == run("verify")


def test_simulate(plus_circuit):
    code, text = run("simulate", "--circuit", str(plus_circuit), "--shots", "1000", "--seed", "3")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "m,count"
    assert sum(int(l.split(",")[1]) for l in lines[1:]) == 1000
    assert run("simulate", "--circuit", str(plus_circuit), "--shots", "1000", "--seed", "3")[1] == text


def test_simulate_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run("simulate", "--circuit", str(bad))
    assert code == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_simulate_dataflow_error(tmp_path, capsys):
    doc = {"wires": [{"id": "q", "dim": 2}],
           "ops": [{"type": "discard", "wire": "q"}, {"type": "gate", "name": "X", "targets": ["q"]}]}
    path = tmp_path / "df.json"
    path.write_text(json.dumps(doc))
    assert run("simulate", "--circuit", str(path))[0] == 2
    assert "'q'" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert run("simulate", "--circuit", str(missing))[0] == 3
    assert str(missing) in capsys.readouterr().err


def test_usage_errors():
    assert run()[0] == 2
    assert run("distill")[0] == 2
    assert run("distill", "--scan", "0.1:0.2")[0] == 2
    assert run("bogus")[0] == 2


def test_distill_scan_csv(tmp_path):
    out = tmp_path / "scan.csv"
    code, text = run("distill", "--scan", "0.05:0.2:4", "--out", str(out))
    assert code == 0 and text == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "p,rounds,converged,final_px,final_pz,final_pxz,raw_per_output"
    assert len(lines) == 5
    assert [l.split(",")[2] for l in lines[1:]] == ["1", "1", "0", "0"]
    again = tmp_path / "again.csv"
    run("distill", "--scan", "0.05:0.2:4", "--out", str(again))
    assert again.read_bytes() == out.read_bytes()


def test_distill_ratio_and_threshold():
    code, text = run("distill", "--ratio", "--threshold")
    values = dict(l.split(",") for l in text.splitlines())
    assert code == 0
    assert float(values["quadratic_ratio"]) == pytest.approx(6.83, abs=0.01)
    assert values["raw_composite_ratio"] == "14"
    assert 0 < float(values["threshold"]) < 0.4


def test_distill_bad_bracket():
    assert run("distill", "--threshold", "--bracket", "0.01:0.05")[0] == 1


def test_distill_blocks():
    code, text = run("distill", "--blocks")
    assert code == 0
    assert "X,2,2*p_x+2*p_xz,p_x**2+p_xz**2,2*p_z,2*p_x*p_xz" in text.splitlines()
    assert "z_parity_weight3_undetected,7" in text


def test_transpile(tmp_path):
    doc = {"wires": [{"id": "a", "dim": 2}, {"id": "b", "dim": 2}],
           "ops": [{"type": "gate", "name": "T", "targets": ["a"]},
                   {"type": "gate", "name": "CS", "targets": ["a", "b"]}],
           "outputs": ["a", "b"]}
    src, dst = tmp_path / "in.json", tmp_path / "out.json"
    src.write_text(json.dumps(doc))
    code, text = run("transpile", "--in", str(src), "--out", str(dst))
    assert code == 0
    report = dict(l.split("=") for l in text.splitlines() if not l.startswith("#"))
    assert report == {"t_count": "1", "cs_count": "1", "toffoli_count": "0", "f_states_used": "3",
                      "t_states_equivalent": "4", "gadget_depth": "2"}
    names = {op.name for op in parse(dst.read_text()).ops if hasattr(op, "name")}
    assert not names & {"T", "CS", "CCX"}


def test_transpile_rejects_qudits(tmp_path):
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"wires": [{"id": "a", "dim": 4}], "ops": [], "outputs": ["a"]}))
    assert run("transpile", "--in", str(src), "--out", str(tmp_path / "o.json"))[0] == 2


def test_transpile_unwritable(tmp_path):
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"wires": [{"id": "a", "dim": 2}], "ops": [], "outputs": ["a"]}))
    assert run("transpile", "--in", str(src), "--out", str(tmp_path / "no" / "o.json"))[0] == 3
