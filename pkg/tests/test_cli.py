import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from hochcalc import cli, signs

SMALL = ["--bounds", "arity=2,chain=2,deg=2,size=5,marked=4,weight=2,vars=1,n=4,k=1"]


def run(*argv):
    return cli.run(list(argv))


def test_identities_pass_and_report(tmp_path, capsys):
    code = run("verify", "identities", "--algebra", "dual_numbers", "--max-chain", "3", "--arity", "3", "--out", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "identities.json").read_text())
    assert report["summary"]["status"] == "pass"
    assert report["config"]["algebra"] == "dual_numbers"
    assert report["config"]["seed"] == 0
    assert len(report["signs_manifest_sha256"]) == 64
    assert all(c["status"] == "pass" for c in report["checks"])
    assert "identities: pass" in capsys.readouterr().out


def test_default_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env-out"))
    assert run("verify", "dims", "--bounds", "n=3,weight=2") == 0
    assert (tmp_path / "env-out" / "dims.json").exists()


def test_default_directory_without_environment(tmp_path, monkeypatch):
    monkeypatch.delenv(cli.OUT_ENV, raising=False)
    monkeypatch.chdir(tmp_path)
    assert run("verify", "dims", "--bounds", "n=3,weight=2") == 0
    assert (tmp_path / cli.DEFAULT_OUT / "dims.json").exists()


def test_csv_output(tmp_path):
    assert run("verify", "cohomology", "--algebra", "matrix(2)", "--bounds", "arity=2,chain=2", "--format", "csv", "--out", str(tmp_path)) == 0
    rows = list(csv.DictReader((tmp_path / "cohomology.csv").open()))
    assert rows and set(rows[0]) == {"suite", "id", "status", "checked", "witness"}
    assert all(r["status"] == "pass" for r in rows)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nonsense"],
        ["verify", "identities", "--bounds", "depth=3"],
        ["verify", "identities", "--bounds", "arity=x"],
        ["verify", "identities", "--algebra", "no_such_algebra"],
        ["verify", "hkr", "--algebra", "dual_numbers"],
        ["verify", "identities", "--arity", "-1"],
        ["verify", "ks", "--size", "40"],
        [],
    ],
)
def test_usage_errors_exit_two(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(*argv) == 2
    assert not (tmp_path / cli.DEFAULT_OUT).exists()


def test_corrupted_sign_manifest_fails_hkr(tmp_path):
    data = json.loads((Path(signs.__file__).parent / "signs.json").read_text())
    data["rules"]["induced_lie_derivative"]["exponent"] = "a"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    out = tmp_path / "out"
    code = run("verify", "hkr", "--vars", "1", "--deg", "2", "--arity", "2", "--signs", str(bad), "--out", str(out))
    assert code == 1
    report = json.loads((out / "hkr.json").read_text())
    assert report["summary"]["status"] == "fail"
    assert report["config"]["signs"] == "bad.json"
    failing = [c for c in report["checks"] if c["status"] == "fail"]
    assert failing and all("witness" in c for c in failing)
    # the packaged manifest is back in force afterwards
    assert run("verify", "hkr", "--vars", "1", "--deg", "2", "--arity", "2", "--out", str(out)) == 0


def test_malformed_manifest_exits_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("verify", "dims", "--signs", str(bad), "--out", str(tmp_path)) == 2


def test_all_suites_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run("verify", "all", *SMALL, "--seed", "3", "--out", str(out)) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(f"{s}.json" for s in cli.SUITES)
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "hochcalc", "verify", "dims", "--bounds", "n=3,weight=2", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "dims: pass" in proc.stdout


def test_parse_bounds():
    assert cli.parse_bounds("deg=3, arity=2") == {"deg": 3, "arity": 2}
    assert cli.parse_bounds(None) == {}
    with pytest.raises(cli.UsageError):
        cli.parse_bounds("deg=-1")
