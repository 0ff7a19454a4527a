"""The command line: exit codes, file outputs, verify/report behavior."""

import json

import pytest

from holonomy.cli import main

CI_FLAGS = [
    "--m", "11", "--levels", "3", "--seed", "7",
    "--diam-mult", "2", "--girth", "8", "--chord", "9",
]


@pytest.fixture(scope="module")
def small_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli_small")
    g, b = d / "g.json", d / "b.json"
    rc = main(["build", "--m", "12", "--levels", "2", "--seed", "0",
               "--out", str(g), "--log", str(b)])
    assert rc == 0
    return g, b


@pytest.fixture(scope="module")
def ci_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli_ci")
    g, b = d / "g.json", d / "b.json"
    rc = main(["build", *CI_FLAGS, "--out", str(g), "--log", str(b)])
    assert rc == 0
    return g, b


# ---------------------------------------------------------------------------
# build
# ---------------------------------------------------------------------------


def test_build_stdout(small_files, capsys):
    # the fixture already ran; run again into the same files to see output
    g, b = small_files
    rc = main(["build", "--m", "12", "--levels", "2", "--seed", "0",
               "--out", str(g), "--log", str(b)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "vertices 1008" in out
    assert "stage sizes: 1 4 1008" in out
    assert "boundary edges: 1 1 0" in out


def test_build_deterministic_bytes(tmp_path):
    pairs = []
    for tag in ("one", "two"):
        g = tmp_path / f"g_{tag}.json"
        b = tmp_path / f"b_{tag}.json"
        assert main(["build", "--m", "12", "--levels", "2", "--seed", "0",
                     "--out", str(g), "--log", str(b)]) == 0
        pairs.append((g.read_bytes(), b.read_bytes()))
    assert pairs[0] == pairs[1]


def test_build_rejects_strict_small_m(capsys):
    rc = main(["build", "--m", "5", "--schedule", "paper", "--levels", "2",
               "--seed", "0", "--out", "/tmp/_no.json", "--log", "/tmp/_no2.json"])
    assert rc == 2
    assert "error:" in capsys.readouterr().err


def test_build_budget_exit(tmp_path, capsys):
    rc = main(["build", "--m", "12", "--schedule", "paper", "--levels", "3",
               "--seed", "0", "--out", str(tmp_path / "g.json"),
               "--log", str(tmp_path / "b.json")])
    assert rc == 4
    err = capsys.readouterr().err
    assert "budget exceeded:" in err
    assert "10^" in err  # astronomic sizes are reported as magnitudes


def test_missing_seed_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["build", "--m", "12", "--out", "x", "--log", "y"])
    assert e.value.code == 2


def test_unknown_command():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_passes(small_files, capsys):
    g, b = small_files
    rc = main(["verify", "--graph", str(g), "--log", str(b), "--r-max", "2"])
    out = capsys.readouterr().out
    assert rc == 0
    passes = [line for line in out.splitlines() if line.startswith("PASS ")]
    assert len(passes) == 8
    assert "all checks passed" in out
    for name in (
        "proper coloring",
        "connected",
        "log consistency",
        "D-edges are bridges",
        "boundary sizes",
        "net partitions",
        "word witnesses",
        "pushforward defects",
    ):
        assert any(name in line for line in passes), name


def test_verify_corrupted_graph(small_files, tmp_path, capsys):
    g, b = small_files
    text = g.read_text()
    bad = tmp_path / "bad.json"
    # recolor one A-edge as B: some endpoint now repeats a color
    bad.write_text(text.replace('"A"]', '"B"]', 1))
    rc = main(["verify", "--graph", str(bad), "--log", str(b)])
    assert rc == 3
    assert "invariant violated:" in capsys.readouterr().err


def test_verify_tampered_log(small_files, tmp_path, capsys):
    g, b = small_files
    d = json.loads(b.read_text())
    d["sizes"][-1] -= 1
    bad = tmp_path / "bad_log.json"
    bad.write_text(json.dumps(d))
    rc = main(["verify", "--graph", str(g), "--log", str(bad)])
    captured = capsys.readouterr()
    assert rc == 3
    assert "FAIL" in captured.out
    assert "invariant violated:" in captured.err


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def test_report_outputs(ci_files, tmp_path, capsys):
    g, b = ci_files
    out_dir = tmp_path / "rep"
    rc = main(["report", "--graph", str(g), "--log", str(b),
               "--out-dir", str(out_dir)])
    out = capsys.readouterr().out
    assert rc == 0
    for metric in ("edge_measure_mu1", "free_fraction_mu2", "cost_estimate_mu2",
                   "tv_distance", "gap"):
        assert any(line.startswith(metric) for line in out.splitlines()), metric
    cost = json.loads((out_dir / "cost_report.json").read_text())
    assert sorted(cost.keys()) == [
        "cost_estimate_mu2", "edge_measure_mu1", "free_fraction_mu2",
        "gap", "k", "levels", "m", "r", "tv_distance",
    ]
    assert cost["m"] == 11
    assert cost["gap"] > 0.25
    types_lines = (out_dir / "types.csv").read_text().splitlines()
    assert types_lines[0] == "radius,class,count,root_degree,fingerprint,parent"
    hol_lines = (out_dir / "holonomy.csv").read_text().splitlines()
    assert hol_lines[0] == "radius,class,count,m_alpha"
    assert len(hol_lines) > 1


def test_report_radius_zero_degenerate(ci_files, tmp_path, capsys):
    g, b = ci_files
    rc = main(["report", "--graph", str(g), "--log", str(b),
               "--r", "0", "--out-dir", str(tmp_path / "r0")])
    out = capsys.readouterr().out
    assert rc == 0
    assert "edge_measure_mu1 0.000000" in out


def test_report_two_levels_insufficient(small_files, tmp_path, capsys):
    g, b = small_files
    rc = main(["report", "--graph", str(g), "--log", str(b),
               "--out-dir", str(tmp_path / "x")])
    assert rc == 2
    assert "insufficient levels" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# demo and environment
# ---------------------------------------------------------------------------


def test_demo_json(capsys):
    rc = main(["demo", "--n", "12"])
    out = capsys.readouterr().out
    assert rc == 0
    d = json.loads(out)
    assert d["n"] == 12
    assert d["frontier"] == 11
    assert d["radii"]["1"]["classes"] == 2
    assert d["radii"]["1"]["m_alpha_vertex1"] == 10


def test_thread_env_invalid(monkeypatch, capsys):
    monkeypatch.setenv("HOLONOMY_THREADS", "many")
    assert main(["demo", "--n", "12"]) == 2
    monkeypatch.setenv("HOLONOMY_THREADS", "0")
    assert main(["demo", "--n", "12"]) == 2


def test_thread_env_valid(monkeypatch, capsys):
    monkeypatch.setenv("HOLONOMY_THREADS", "1")
    assert main(["demo", "--n", "12"]) == 0
