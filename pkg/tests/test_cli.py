import json
from fractions import Fraction as F

import pytest

from nullseq import certio
from nullseq.cli import main
from nullseq.monothetic import GeneratorTrace, verify_trace


@pytest.fixture(scope="module")
def trace_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "trace.json"
    assert main(["build-generator", "--stages", "2", "--out", str(path), "--no-timestamp"]) == 0
    return path


def test_build_prints_table(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert main(["build-generator", "--stages", "2", "--out", str(out), "--no-timestamp"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3 and lines[1].split()[:2] == ["1", "2"]
    assert verify_trace(certio.load(out)).ok


def test_build_zero_stages_warns(tmp_path, capsys):
    assert main(["build-generator", "--stages", "0", "--out", str(tmp_path / "z.json")]) == 0
    assert "warning" in capsys.readouterr().err


def test_budget_exhaustion(tmp_path):
    out = tmp_path / "t.json"
    assert main(["build-generator", "--stages", "3", "--budget", "1", "--out", str(out)]) == 2
    partial = certio.load(str(out) + ".partial")
    assert isinstance(partial, GeneratorTrace) and partial.depth == 1


def test_budget_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("NULLSEQ_BUDGET_DEFAULT", "1")
    assert main(["build-generator", "--stages", "2", "--out", str(tmp_path / "t.json")]) == 2


def test_outputs_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        main(["build-generator", "--stages", "2", "--out", str(p), "--no-timestamp"])
    assert a.read_bytes() == b.read_bytes()


def test_verify(trace_file, tmp_path, capsys):
    assert main(["verify", "--in", str(trace_file)]) == 0
    data = json.loads(trace_file.read_text())
    data["stages"][1]["n"] = 2
    data["stages"][1]["certificate"]["n"] = 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", "--in", str(bad)]) == 1
    assert "FAIL stage 2 (i) increasing" in capsys.readouterr().out
    assert main(["verify", "--in", str(tmp_path / "missing.json")]) == 3
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert main(["verify", "--in", str(junk)]) == 3


def test_approx(trace_file, tmp_path, capsys):
    assert main(["approx", "--in", str(trace_file), "--target", "[T: 0 | tail<=0]", "--epsilon", "1"]) == 0
    assert "k = 0" in capsys.readouterr().out
    out = tmp_path / "a.json"
    assert main(["approx", "--in", str(trace_file), "--target", "[T: 1/2 | tail<=0]",
                 "--epsilon", "1/100", "--out", str(out)]) == 4
    assert "required stages 8" in capsys.readouterr().err
    assert main(["approx", "--in", str(trace_file), "--target", "[T: 1/2", "--epsilon", "1"]) == 3


def test_schur_demo(tmp_path):
    out = tmp_path / "w.json"
    assert main(["schur-demo", "--t", "T:1/3", "--horizon", "20", "--support", "10",
                 "--entry-bound", "3", "--out", str(out), "--no-timestamp"]) == 0
    rep = certio.load(out)
    assert rep.vanish_after == 10 and rep.distance == F(1, 3)
    assert main(["schur-demo", "--t", "T:0"]) == 5


def test_dichotomy(tmp_path, capsys):
    empty = tmp_path / "e.json"
    empty.write_text("[]")
    assert main(["dichotomy", "--in", str(empty), "--radius", "1/10", "--no-timestamp"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["kind"] == "cover" and res["centers"] == []
    grid = tmp_path / "g.json"
    grid.write_text(json.dumps([f"T:{k}/200" for k in range(200)]))
    assert main(["dichotomy", "--in", str(grid), "--radius", "1/10", "--no-timestamp"]) == 0
    assert len(json.loads(capsys.readouterr().out)["centers"]) <= 11
    grid.write_text('["T:1/2", "bogus"]')
    assert main(["dichotomy", "--in", str(grid), "--radius", "1/10"]) == 3


def test_gclosed(tmp_path, capsys):
    ys = tmp_path / "ys.json"
    ys.write_text(json.dumps([f"[T: {'0, ' * (n - 1)}1/3 | tail<=0]" for n in range(1, 9)]))
    out = tmp_path / "s.json"
    args = ["gclosed", "--in", str(ys), "--delta", "1/4", "--tests", "5", "--no-timestamp"]
    assert main(args + ["--out", str(out)]) == 0
    first = out.read_bytes()
    assert main(args + ["--out", str(out)]) == 0
    assert out.read_bytes() == first
    assert certio.load(out).lower_bound == F(1, 3)
    ys.write_text('["[T: 0, 0 | tail<=0]"]')
    assert main(["gclosed", "--in", str(ys), "--delta", "1/4"]) == 5


def test_orbit_plot(tmp_path, capsys):
    prefix = tmp_path / "orbit"
    assert main(["orbit-plot", "--z", "2/7", "--n", "3", "--out", str(prefix)]) == 0
    rows = (tmp_path / "orbit.csv").read_text().strip().splitlines()
    assert len(rows) == 8
    assert (tmp_path / "orbit.svg").read_text().count("<circle") == 8
    assert json.loads((tmp_path / "orbit.json").read_text())["max_gap"] == "1/7"
