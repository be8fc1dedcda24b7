import json
import subprocess
import sys

import pytest

from hopcore.cli import rng_for, run, run_solver
from hopcore.config import Constants
from hopcore.demands import load_demands
from hopcore.graph import load_graph


def _run(capsys, *argv):
    code = run([str(a) for a in argv])
    return code, capsys.readouterr().out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


SOLVE_CASES = [
    ("sf", "pairs.dem"), ("spanner", "pairs.dem"), ("ond", "pairs.dem"), ("gst", "groups.dem"),
    ("gst-rep", "groups.dem"), ("kst", "terminals.dem"), ("gsf", "group_pairs.dem"),
    ("online-gst", "groups.dem"), ("online-gsf", "group_pairs.dem"),
]


def test_embed(capsys, samples_dir, clean_env):
    out = _json(capsys, "embed", samples_dir / "small.graph", "--root", 2)
    assert out["root"] == 2 and out["seed"] == 0
    for e in out["edges"]:
        assert e["witness"][0] == e["u"] and e["witness"][-1] == e["v"]


def test_stretch_and_connector(capsys, samples_dir, clean_env):
    out = _json(capsys, "stretch", samples_dir / "small.graph", "--samples", 5)
    assert out["samples"] == 5 and out["sandwich_violations"] == 0
    out = _json(capsys, "connector", samples_dir / "small.graph", "--no-complete", "--marked", "0,2,4")
    assert out["congestion_max"] <= 4


@pytest.mark.parametrize("kind,dem", SOLVE_CASES)
def test_solve_is_deterministic(capsys, samples_dir, clean_env, kind, dem):
    argv = ["solve", kind, samples_dir / "small.graph", samples_dir / dem, "--seed", 3, "--no-complete"]
    code1, out1 = _run(capsys, *argv)
    code2, out2 = _run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    feasible = data["feasible"] if "steps" not in data else all(s["feasible"] for s in data["steps"])
    assert feasible


def test_cli_matches_library(capsys, samples_dir, clean_env):
    out = _json(capsys, "solve", "gst", samples_dir / "small.graph", samples_dir / "groups.dem",
                "--seed", 5, "--no-complete")
    g = load_graph(samples_dir / "small.graph", complete=False)
    demand = load_demands(samples_dir / "groups.dem")
    sol = run_solver("gst", g, 2, demand, rng_for(5, "solve"), Constants())
    assert out == {**sol.to_json(g, 5), "kind": "gst"}


def test_oracle_command(capsys, samples_dir, clean_env):
    out = _json(capsys, "oracle", "sf", samples_dir / "small.graph", samples_dir / "pairs.dem",
                "--no-complete", "--hops", 3)
    assert out["feasible"] and out["cost"] == 7 and out["hop_bound"] == 3


def test_seed_from_env_and_config(capsys, samples_dir, monkeypatch, clean_env):
    monkeypatch.setenv("HOPCORE_SEED", "7")
    env_out = _json(capsys, "embed", samples_dir / "small.graph")
    assert env_out["seed"] == 7
    monkeypatch.delenv("HOPCORE_SEED")
    cfg_out = _json(capsys, "embed", samples_dir / "small.graph", "--config", samples_dir / "config.json")
    assert cfg_out == env_out
    flag_out = _json(capsys, "embed", samples_dir / "small.graph", "--seed", 7)
    assert flag_out == env_out


def test_out_file(capsys, samples_dir, tmp_path, clean_env):
    target = tmp_path / "emb.json"
    code, printed = _run(capsys, "embed", samples_dir / "small.graph", "--out", target)
    assert code == 0 and printed == ""
    assert json.loads(target.read_text())["schema"] == 1


@pytest.mark.parametrize("argv,code,kind", [
    (["solve", "gst", "small.graph", "pairs.dem"], 4, "parse-error"),
    (["embed", "missing.graph"], 4, "io"),
    (["embed"], 4, "usage"),
    (["solve", "nope", "small.graph", "pairs.dem"], 4, "usage"),
    (["embed", "small.graph", "--hops", 0], 1, None),
    (["solve", "sf", "small.graph", "pairs.dem", "--no-complete", "--hops", 1], 0, None),
])
def test_exit_codes(capsys, samples_dir, clean_env, argv, code, kind):
    argv = [samples_dir / a if str(a).endswith((".graph", ".dem")) else a for a in argv]
    got, out = _run(capsys, *argv)
    assert got == code
    if code == 0:
        return
    err = json.loads(out)["error"]
    if kind:
        assert err["kind"] == kind


def test_oracle_reports_infeasible(capsys, tmp_path, clean_env):
    gfile = tmp_path / "split.graph"
    gfile.write_text("p 4 2 1\ne 0 1 1\ne 2 3 1\n")
    dfile = tmp_path / "d.dem"
    dfile.write_text("g 3\n")
    code, out = _run(capsys, "oracle", "gst", gfile, dfile, "--no-complete")
    assert code == 0 and json.loads(out)["feasible"] is False


def test_bench_csv(capsys, clean_env):
    code, out = _run(capsys, "bench", "--sizes", "6", "--repeats", 1, "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("kernel,size,backend")
    assert all(line.endswith("True") for line in lines[1:])


def test_module_entry_point(samples_dir):
    res = subprocess.run([sys.executable, "-m", "hopcore", "embed", str(samples_dir / "small.graph"), "--seed", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["seed"] == 1
