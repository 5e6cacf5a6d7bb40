import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from partlab.experiments import ExperimentConfig, run_scan
from partlab.lab import EXIT_OK, EXIT_PRECISION, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", "--p", "229")
    assert code == EXIT_OK
    doc = json.loads(out)
    s = doc["summary"]
    assert (s["unit_t"], s["unit_u"], s["h_sine"], s["h_forms"]) == (15, 1, 3, 3)
    assert s["cusp_order"] == "81/1"
    assert doc["header"]["command"] == "invariants"
    assert set(doc["header"]["versions"]) == {"partlab", "mpmath", "numpy", "python"}
    assert "time" not in json.dumps(doc["header"])


def test_invariants_p5_values(capsys):
    _, out, _ = run(capsys, "invariants", "--p", "5", "--digits", "30")
    s = json.loads(out)["summary"]
    assert s["cusp_order"] == "1/5"
    assert s["B2chi_standard"] == "4/5"
    assert s["L1"].startswith("0.43040894")
    assert len(s["L1"].replace("0.", "", 1)) == 30


def test_series_csv(capsys):
    code, out, _ = run(capsys, "series", "--p", "5", "--set", "minus", "--nmax", "11", "--format", "csv")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0].startswith("# ") and lines[1].startswith("# summary ")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[2:]))))
    assert [int(r["p(n)"]) for r in rows] == [1, 0, 1, 1, 1, 1, 2, 2, 3, 3, 4, 4]


def test_series_big_integers_are_strings(capsys):
    _, out, _ = run(capsys, "series", "--set", "classical", "--nmax", "500")
    rows = json.loads(out)["rows"]
    assert rows[500]["p(n)"] == "2300165032574323995027"
    assert rows[10]["p(n)"] == 42


@pytest.mark.parametrize("argv", [
    ["invariants", "--p", "7"],
    ["invariants", "--p", "4"],
    ["invariants"],
    ["series", "--p", "5", "--k", "40"],
    ["scan-conjecture", "--pmax", "30", "--kmin", "2", "--kmax", "1"],
    ["schur", "--p", "5", "--t", "-1"],
    ["meinardus", "--p", "5", "--convention", "other"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert "usage error" in err


def test_budget_refusal(capsys):
    code, _, err = run(capsys, "scan-conjecture", "--pmax", "97", "--nmax", "10000", "--budget", "1e6")
    assert code == EXIT_USAGE
    assert "budget" in err


def test_precision_failure_exit_code(capsys):
    code, _, err = run(capsys, "schur", "--p", "5", "--t", "0.001", "--nmax", "100")
    assert code == EXIT_PRECISION
    assert "precision failure" in err


def test_reruns_are_byte_identical(tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert main(["petersson", "--p", "13", "--nmax", "2000", "--out", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_petersson_and_cesaro_trend(capsys):
    for cmd in ("petersson", "cesaro"):
        _, out, _ = run(capsys, cmd, "--p", "5", "--nmax", "4000")
        s = json.loads(out)["summary"]
        assert s["gaps_decreasing"]
        assert s["checkpoints"] == [400, 2000, 4000]


def test_schur_report(capsys):
    code, out, _ = run(capsys, "schur", "--p", "5", "--t", "0.05", "0.2", "0.1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert [r["t"][:4] for r in doc["rows"]] == ["0.20", "0.10", "0.05"]
    assert doc["summary"]["improving"] and doc["summary"]["identities_ok"]


def test_meinardus_report(capsys):
    _, out, _ = run(capsys, "meinardus", "--p", "5", "--n", "500", "2000")
    s = json.loads(out)["summary"]
    assert s["trend_to_one"] == {"+": True, "-": True}
    _, out, _ = run(capsys, "meinardus", "--p", "5", "--n", "2000", "--convention", "printed")
    assert float(json.loads(out)["summary"]["final_ratio"]["+"]) < 1e-5


def test_appendix_report(capsys):
    _, out, _ = run(capsys, "appendix-excl1", "--p", "5", "--nmax", "2000")
    s = json.loads(out)["summary"]
    assert s["equals_first_difference_of_plus"]
    assert s["inequality_threshold"] <= 1000


def test_scan_small(capsys):
    code, out, _ = run(capsys, "scan-conjecture", "--pmax", "13", "--kmin", "-1", "--kmax", "1",
                       "--nmax", "1500", "--classical")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["summary"]["jobs"] == 2 * 2 * 3 + 3
    assert doc["summary"]["all_support"]
    keys = [(r["p"] or 0, r["set"], r["k"]) for r in doc["rows"]]
    assert keys == sorted(keys)


def test_scan_checkpoint_resume(tmp_path):
    cfg = ExperimentConfig("scan-conjecture", pmax=17, kmin=0, kmax=1, N=800)
    first = run_scan(cfg, checkpoint_dir=tmp_path).to_json()
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files == [f"scan_p{p}_k0_1_N800.json" for p in (13, 17, 5)]
    assert run_scan(cfg, checkpoint_dir=tmp_path).to_json() == first
    # a resumed run takes stored rows as they are rather than recomputing them
    path = tmp_path / files[0]
    rows = json.loads(path.read_text())
    rows[0]["violations"] = -1
    path.write_text(json.dumps(rows))
    resumed = run_scan(cfg, checkpoint_dir=tmp_path)
    assert any(r["violations"] == -1 for r in resumed.rows)


def test_scan_workers_match_serial():
    serial = run_scan(ExperimentConfig("scan-conjecture", pmax=29, kmin=0, kmax=0, N=600))
    pooled = run_scan(ExperimentConfig("scan-conjecture", pmax=29, kmin=0, kmax=0, N=600, workers=2))
    assert serial.rows == pooled.rows


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "partlab", "invariants", "--p", "13", "--format", "csv"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("# ")
    proc = subprocess.run([sys.executable, "-m", "partlab", "invariants", "--p", "9"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 1


SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


def test_scripts_run(tmp_path):
    proc = subprocess.run([sys.executable, str(SCRIPTS / "run_experiments.py"), "--primes", "5",
                           "--nmax", "500", "--outdir", str(tmp_path / "res")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert len(list((tmp_path / "res").glob("*.json"))) == 8
    proc = subprocess.run([sys.executable, str(SCRIPTS / "desk_scan.py"), "--pmax", "13", "--kmin", "0",
                           "--kmax", "0", "--nmax", "500", "--workers", "1",
                           "--checkpoint", str(tmp_path / "ck"), "--out", str(tmp_path / "scan.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stdout
    assert "all support: True" in proc.stdout
