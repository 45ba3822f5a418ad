import csv
import io
import json
import subprocess
import sys

import pytest

from ptsp_ts.alns import build_start
from ptsp_ts.cli import BenchReport, BenchRow, gap, main
from ptsp_ts.feasibility import save_schedule
from ptsp_ts.instance import generate_instance, load_instance, save_instance
from ptsp_ts.objective import score, CONTROL
from ptsp_ts.oracle import solve_exact

from conftest import one_shift, task
from test_feasibility import forged


def rows(path):
    return list(csv.DictReader(open(path)))


@pytest.fixture
def tiny_file(tmp_path):
    p = tmp_path / "tiny.json"
    assert main(["generate", "--class", "tiny", "--seed", "4", "--out", str(p)]) == 0
    return p


def test_generate_missing_class(tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["generate", "--seed", "1", "--out", str(tmp_path / "x.json")])
    assert e.value.code == 2


def test_exit_code_via_module(tmp_path):
    r = subprocess.run([sys.executable, "-m", "ptsp_ts", "generate", "--seed", "1"], capture_output=True)
    assert r.returncode == 2


def test_validate_oracle_schedule(tmp_path, tiny_file, capsys):
    inst = load_instance(tiny_file)
    save_schedule(solve_exact(inst).optimal_schedule, tmp_path / "opt.json")
    assert main(["validate", "--instance", str(tiny_file), "--schedule", str(tmp_path / "opt.json")]) == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_validate_forged_overlap(tmp_path, capsys):
    inst = one_shift([task(0, 0, 6), task(1, 3, 9)])
    save_instance(inst, tmp_path / "i.json")
    save_schedule(forged(inst, {0: (0, 12, ())}, [(0, 0), (1, 0)]), tmp_path / "s.json")
    assert main(["validate", "--instance", str(tmp_path / "i.json"), "--schedule", str(tmp_path / "s.json")]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["ok"] is False and {v["tag"] for v in rep["violations"]} == {"Bandwidth"}


def test_missing_file_exit_1(tmp_path):
    assert main(["validate", "--instance", str(tmp_path / "none.json"), "--schedule", "x"]) == 1


def test_solve_zero_iterations(tmp_path, tiny_file):
    out = tmp_path / "o"
    assert main(["solve", "--instance", str(tiny_file), "--seeds", "1", "--iterations", "0",
                 "--out-dir", str(out)]) == 0
    (row, summary) = rows(out / "report.csv")
    start = score(build_start(load_instance(tiny_file)), CONTROL)
    assert float(row["Avg"]) == float(row["Best"]) == start
    assert summary["instance"] == "Average"


def test_solve_gaps_ordered(tmp_path):
    inst = tmp_path / "s.json"
    save_instance(generate_instance("small", 1), inst)
    out = tmp_path / "o"
    assert main(["solve", "--instance", str(inst), "--seeds", "1-10", "--iterations", "100",
                 "--reference", "3000", "--out-dir", str(out), "--no-timing"]) == 0
    row = rows(out / "report.csv")[0]
    assert int(row["runs"]) == 10
    assert float(row["AGap%"]) >= float(row["BGap%"])
    assert len(list(out.glob("*.jsonl"))) == 10


def test_solve_is_deterministic(tmp_path, tiny_file):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        main(["solve", "--instance", str(tiny_file), "--seeds", "1,2", "--iterations", "50",
              "--out-dir", str(out), "--no-timing"])
        outs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outs[0] == outs[1]


def test_solve_flags(tmp_path, tiny_file):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"iterations": 7, "eps3": 0}))
    out = tmp_path / "o"
    assert main(["solve", "--instance", str(tiny_file), "--config", str(cfg), "--seed", "3",
                 "--weights", "1,1,-1,1,1000", "--alns-plus", "--out-dir", str(out)]) == 0
    used = json.loads((out / "config.json").read_text())
    assert used["iterations"] == 7 and used["eps3"] == 0 and used["successor_mode"]
    assert used["weights"] == "1,1,-1,1,1000"


def test_bench_single_instance(tmp_path, tiny_file):
    suite = tmp_path / "suite"
    suite.mkdir()
    (suite / "a.json").write_bytes(tiny_file.read_bytes())
    assert main(["bench", "--suite", str(suite), "--seeds", "1-3", "--iterations", "30",
                 "--out", str(tmp_path / "b.csv"), "--no-timing"]) == 0
    row, summary = rows(tmp_path / "b.csv")
    assert {k: v for k, v in summary.items() if k != "instance"} == {k: v for k, v in row.items() if k != "instance"}


def test_bench_against_oracle(tmp_path):
    suite = tmp_path / "suite"
    suite.mkdir()
    ref = {}
    insts = {seed: generate_instance("tiny", seed) for seed in range(1, 6)}
    names = [i.name for i in insts.values()]
    for seed, inst in insts.items():
        save_instance(inst, suite / f"{seed}.json")
        res = solve_exact(inst)
        assert res.proven
        # colliding generated names are reported under the file name
        ref[inst.name if names.count(inst.name) == 1 else str(seed)] = float(res.optimal_value)
    (tmp_path / "ref.json").write_text(json.dumps(ref))
    assert main(["bench", "--suite", str(suite), "--seeds", "1-2", "--ladder", "10,100",
                 "--reference", str(tmp_path / "ref.json"), "--out", str(tmp_path / "b.csv")]) == 0
    table = rows(tmp_path / "b.csv")
    assert {r["iterations"] for r in table} == {"10", "100"}
    assert len(table) == 12
    for r in table:
        assert float(r["BGap%"]) >= -1e-9 and float(r["AGap%"]) >= float(r["BGap%"])


def test_report_round_trip():
    rep = BenchReport([BenchRow("8_2_100", 1000, 10, 2501.333, 2510, 1.2345, 1.2, 0.8, 84.4),
                       BenchRow("8_3_120", 1000, 10, 2999.5, 3001, 0.9, None, None, 90)])
    text = rep.to_csv()
    assert BenchReport.from_csv(text).to_csv() == text
    summary = list(csv.DictReader(io.StringIO(text)))[-1]
    assert summary["instance"] == "Average" and summary["AGap%"] == ""


def test_gap():
    assert gap(200, 190) == pytest.approx(5.0)
    assert gap(200, 210) == pytest.approx(-5.0)
    assert gap(None, 3) is None


def test_export_render_exact(tmp_path, tiny_file, capsys):
    assert main(["export-lp", "--instance", str(tiny_file), "--out", str(tmp_path / "m.lp")]) == 0
    assert (tmp_path / "m.lp").read_text().startswith("\\ instance")
    assert main(["exact", "--instance", str(tiny_file), "--out", str(tmp_path / "opt.json")]) == 0
    info = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert info["proven"]
    assert main(["render", "--instance", str(tiny_file), "--schedule", str(tmp_path / "opt.json"),
                 "--out", str(tmp_path / "r.svg")]) == 0
    assert (tmp_path / "r.svg").read_text().startswith("<?xml")


def test_render_refuses_infeasible(tmp_path):
    inst = one_shift([task(0, 0, 6), task(1, 3, 9)])
    save_instance(inst, tmp_path / "i.json")
    save_schedule(forged(inst, {0: (0, 12, ())}, [(0, 0), (1, 0)]), tmp_path / "s.json")
    assert main(["render", "--instance", str(tmp_path / "i.json"), "--schedule", str(tmp_path / "s.json"),
                 "--out", str(tmp_path / "r.svg")]) == 1
    assert not (tmp_path / "r.svg").exists()
