import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from srr.cli import main
from srr.routing import SplittingStrategy, is_feasible_with_strategy
from srr.storage import enumerate_repair_groups, system_from_spec


@pytest.fixture
def spec(tmp_path):
    def write(name="spec.json", **doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return write


def test_groups_example1(spec, capsys):
    assert main(["groups", spec(K=2, nodes=["f1", "f1", "c", "f2"])]) == 0
    assert capsys.readouterr().out == "f1 (gamma=3): {1},{2},{3,4}\nf2 (gamma=3): {4},{1,3},{2,3}\n"


def test_groups_degenerate_warns(spec, capsys):
    assert main(["groups", spec(K=3, systematic=[0, 0, 0], coded=2)]) == 0
    out = capsys.readouterr()
    assert "(none)" in out.out and "no file recoverable" in out.err


def test_groups_worked_example(spec, capsys):
    assert main(["groups", spec(K=3, mu=1, systematic=[3, 1, 1], coded=3)]) == 0
    f3 = capsys.readouterr().out.splitlines()[2]
    assert "{6,7,8}" in f3 and f3.startswith("f3 (gamma=")


def test_feasible_exit_codes_and_witness(spec, tmp_path, capsys):
    path = spec(K=3, systematic=[0, 0, 0], coded=3)
    wit = tmp_path / "w.json"
    assert main(["feasible", path, "1/3", "1/3", "1/3", "--witness", str(wit)]) == 0
    strategy = SplittingStrategy.from_json(wit.read_text())
    table = enumerate_repair_groups(system_from_spec({"systematic": [0, 0, 0], "coded": 3}))
    assert is_feasible_with_strategy(table, strategy, [F(1, 3)] * 3, 1)
    assert main(["feasible", path, "1", "1", "1"]) == 1
    assert main(["feasible", path, "1", "1"]) == 2
    assert main(["feasible", path, "x", "1", "1"]) == 2
    assert main(["feasible", path, "-1", "1", "1"]) == 2


def test_witness_round_trip_mixed(spec, tmp_path):
    doc = {"K": 3, "systematic": [3, 1, 1], "coded": 3}
    wit = tmp_path / "w.json"
    assert main(["feasible", spec(**doc), "1.5", "2", "1.5", "--witness", str(wit)]) == 0
    table = enumerate_repair_groups(system_from_spec(doc))
    strategy = SplittingStrategy.from_json(wit.read_text())
    assert is_feasible_with_strategy(table, strategy, [F(3, 2), 2, F(3, 2)], 1)


def test_maximize(spec, tmp_path, capsys):
    worked = spec(K=3, systematic=[3, 1, 1], coded=3)
    trace = tmp_path / "trace.jsonl"
    assert main(["maximize", worked, "1.5", "2", "--method", "all", "--trace", str(trace)]) == 0
    assert capsys.readouterr().out == "lp: 1.5\nclosed: 1.5\ngreedy: 1.5\nagree\n"
    assert len(trace.read_text().splitlines()) == 5
    coded = spec("c.json", K=3, systematic=[0, 0, 0], coded=3)
    assert main(["maximize", coded, "0.2", "0.3", "--method", "closed"]) == 0
    assert capsys.readouterr().out == "0.5\n"
    assert main(["maximize", coded, "1", "1"]) == 1
    assert capsys.readouterr().out == "not in region\n"
    assert main(["maximize", coded, "0.2", "0.3", "--mode", "float"]) == 0
    assert capsys.readouterr().out.strip() == "0.5"


def test_maximize_outside_closed_form(spec, capsys):
    path = spec(K=3, systematic=[5, 0, 0], coded=3)
    assert main(["maximize", path, "0", "0", "--method", "closed"]) == 3
    assert "C >= max" in capsys.readouterr().err


def test_maximize_flags_disagreement(spec, capsys):
    assert main(["maximize", spec(K=3, systematic=[3, 0, 0], coded=3), "0", "0",
                 "--method", "all"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "DISAGREE"


def test_region_outputs(spec, tmp_path, capsys):
    path = spec(K=2, systematic=[1, 1], coded=1)
    out = tmp_path / "r.svg"
    assert main(["region", path, "--step", "0.25", "--format", "svg", "--out", str(out)]) == 0
    assert "max L: 2" in capsys.readouterr().out
    assert "<polygon" in out.read_text()
    csv_out = tmp_path / "r.csv"
    coded = spec("c.json", K=3, systematic=[0, 0, 0], coded=3)
    assert main(["region", coded, "--step", "0.5", "--out", str(csv_out)]) == 0
    rows = csv_out.read_text().splitlines()
    assert rows[0] == "lambda_1,lambda_2,L,source,case_label" and len(rows) == 7


def test_region_errors(spec, tmp_path, capsys):
    k4 = spec(K=4, systematic=[1, 0, 0, 0], coded=4)
    assert main(["region", k4, "--format", "svg", "--out", str(tmp_path / "x.svg")]) == 2
    assert "svg" in capsys.readouterr().err
    path = spec("two.json", K=2, systematic=[1, 1], coded=1)
    assert main(["region", path, "--out", str(tmp_path / "no" / "x.csv")]) == 2
    assert main(["region", k4, "--method", "closed", "--out", str(tmp_path / "x.csv")]) == 3


def test_validate(spec, capsys):
    assert main(["validate", spec(K=3, systematic=[0, 0, 0], coded=3), "--step", "0.25"]) == 0
    assert "mismatching points: 0" in capsys.readouterr().out
    assert main(["validate", spec("k2.json", K=2, systematic=[1, 1], coded=1)]) == 3


def test_spec_file_errors(spec, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"K": 2,\n "systematic": [1, 1], "coded": 1,}')
    assert main(["groups", str(bad)]) == 2
    assert f"{bad}:2:" in capsys.readouterr().err
    assert main(["groups", spec(K=2, systematic=[1, 1], coded=1, colour="red")]) == 2
    assert "unknown keys colour" in capsys.readouterr().err
    assert main(["groups", spec("m.json", K=2, coded=1)]) == 2
    assert main(["groups", str(tmp_path / "missing.json")]) == 2
    assert main(["groups", spec("z.json", K=2, systematic=[1, 1], coded=1, mu=0)]) == 2
    assert main([]) == 2
    assert main(["feasible"]) == 2


def test_mode_sources(spec, monkeypatch, capsys):
    path = spec(K=2, systematic=[0, 0], coded=3, mode="float")
    assert main(["maximize", path, "0.5"]) == 0
    assert capsys.readouterr().out == "1\n"
    monkeypatch.setenv("SRR_MODE", "bogus")
    assert main(["maximize", path, "0.5"]) == 2
    assert main(["maximize", path, "0.5", "--mode", "rational"]) == 0


def test_console_entry_point(spec):
    path = spec(K=3, systematic=[0, 0, 0], coded=3)
    proc = subprocess.run([sys.executable, "-m", "srr.cli", "feasible", path, "1", "1", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 1 and proc.stdout == "infeasible\n"
