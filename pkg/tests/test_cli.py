import json

import pytest

from garnier.cli import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    EXIT_RUNTIME,
    cmd_list,
    main,
    read_config,
    ConfigError,
)


def _strip_timing(path):
    rows = [json.loads(line) for line in path.read_text().splitlines()]
    for r in rows:
        r.pop("millis", None)
    return rows


def test_list_default_includes_autoG14(capsys):
    assert main(["list"]) == EXIT_PASS
    line = next(l for l in capsys.readouterr().out.splitlines() if l.startswith("autoG14\t"))
    assert "times=2" in line and "pairs=2" in line and "params=3" in line


def test_list_filter_and_empty_registry():
    out = cmd_list("SdeG*")
    assert all(l.startswith("SdeG") for l in out.splitlines())
    assert cmd_list("*", keys=[]) == ""


def test_verify_autoG14_reports_poisson(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    assert main(["verify", "--systems", "autoG14", "--out", str(out)]) == EXIT_PASS
    assert "PASS  poisson:autoG14:{K1,K2}=0" in capsys.readouterr().out
    ids = [json.loads(l)["id"] for l in out.read_text().splitlines()]
    assert ids == sorted(ids)


def test_verify_degenerations():
    assert main(["verify", "--checks", "degeneration"]) == EXIT_PASS


def test_unledgered_failure_exits_nonzero_with_witness(tmp_path, capsys):
    empty = tmp_path / "ledger.txt"
    empty.write_text("# nothing ledgered\n")
    out = tmp_path / "r.jsonl"
    code = main(["verify", "--systems", "SdeGaK", "--checks", "compatibility",
                 "--ledger", str(empty), "--out", str(out)])
    assert code == EXIT_FAIL
    row = json.loads(out.read_text().splitlines()[0])
    assert row["verdict"] == "fail" and row["witness"]


def test_config_errors(tmp_path):
    assert main(["verify", "--systems", "P9"]) == EXIT_CONFIG
    assert main(["verify", "--checks", "vibes"]) == EXIT_CONFIG
    assert main(["verify", "--jobs", "0"]) == EXIT_CONFIG
    assert main(["frobnicate"]) == EXIT_CONFIG
    bad = tmp_path / "bad.cfg"
    bad.write_text("systems = dVV\ncolour = blue\n")
    assert main(["verify", "--config", str(bad)]) == EXIT_CONFIG
    with pytest.raises(ConfigError):
        read_config(str(tmp_path / "missing.cfg"))


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "suite.cfg"
    out = tmp_path / "from-config.jsonl"
    cfg.write_text(f"# suite\nsystems = SdeG4\nchecks = compatibility, symmetry\n"
                   f"use-constraint = yes\njobs = 2\nout = {out}\n")
    assert main(["verify", "--config", str(cfg)]) == EXIT_PASS
    ids = {json.loads(l)["id"] for l in out.read_text().splitlines()}
    assert "compatibility:SdeG4" in ids and not any(i.startswith("holomorphy") for i in ids)
    other = tmp_path / "flag.jsonl"
    assert main(["verify", "--config", str(cfg), "--checks", "holomorphy", "--out",
                 str(other)]) == EXIT_PASS
    assert all(json.loads(l)["id"].startswith("holomorphy")
               for l in other.read_text().splitlines())


def test_reports_are_deterministic_and_parallel_safe(tmp_path):
    a, b, c = (tmp_path / n for n in ("a.jsonl", "b.jsonl", "c.jsonl"))
    args = ["verify", "--systems", "SdeG3,SdeGa", "--checks", "symmetry,degeneration"]
    assert main(args + ["--out", str(a)]) == EXIT_PASS
    assert main(args + ["--out", str(b)]) == EXIT_PASS
    assert main(args + ["--jobs", "4", "--out", str(c)]) == EXIT_PASS
    assert _strip_timing(a) == _strip_timing(b) == _strip_timing(c)


def _state(tmp_path, text):
    p = tmp_path / "state.txt"
    p.write_text(text)
    return str(p)


def test_integrate_benchmark_horizon(tmp_path, capsys):
    st = _state(tmp_path, "q1 = 1\np1 = 1\nq2 = 1\np2 = 1\na0 = 0.25\na1 = -0.5\na2 = 0.25\n")
    csv_path = tmp_path / "traj.csv"
    code = main(["integrate", "autoG14", "--state", st, "--horizon", "0.5", "--out",
                 str(csv_path), "--use-constraint"])
    assert code == EXIT_PASS
    drifts = [float(l.split()[-1]) for l in capsys.readouterr().out.splitlines()
              if l.startswith("drift")]
    assert len(drifts) == 2 and max(drifts) <= 1e-8
    assert csv_path.read_text().splitlines()[0].startswith("t,q1,p1,q2,p2")


def test_integrate_reports_the_pole(tmp_path, capsys):
    st = _state(tmp_path, "q1 = 1\np1 = 1\nq2 = 1\np2 = 1\na0 = 0.25\na1 = -0.5\na2 = 0.25\n")
    assert main(["integrate", "autoG14", "--state", st]) == EXIT_RUNTIME
    out = capsys.readouterr().out
    assert "movable pole" in out and "last good state" in out


def test_integrate_singular_denominator(tmp_path, capsys):
    # dVV has t*(t-s)-type denominators; start on t = s
    st = _state(tmp_path, "x = 0.1\ny = 0.2\nz = 0.3\nw = 0.4\nt = 0.5\ns = 0.5\n"
                          "a1 = 0.1\na2 = 0.2\na3 = 0.3\na4 = 0.1\na5 = 0.3\n")
    assert main(["integrate", "dVV", "--state", st, "--horizon", "0.6"]) == EXIT_RUNTIME
    assert "denominator" in capsys.readouterr().out


def test_integrate_bad_state(tmp_path):
    st = _state(tmp_path, "q1 = 1\nzz = 3\n")
    assert main(["integrate", "autoG14", "--state", st]) == EXIT_CONFIG
    st = _state(tmp_path, "q1 = one\n")
    assert main(["integrate", "autoG14", "--state", st]) == EXIT_CONFIG


def test_dump(capsys):
    assert main(["dump", "autoG14", "--transforms"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert out.startswith("system: autoG14")
    assert "autoG14:s0" in out
    assert main(["dump", "nope"]) == EXIT_CONFIG
