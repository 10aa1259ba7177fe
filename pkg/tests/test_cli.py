import json
import subprocess
import sys

import pytest

from fccmatter.cli import main
from fccmatter.configuration import load

from _corpus import BRIDGE


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, particles, orientations=None):
    doc = {"particles": [list(p) for p in particles]}
    if orientations is not None:
        doc["orientations"] = orientations
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_gen_rect(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = _run(capsys, "gen", "rect", "3x3@0", "2x2@1", "--out", str(out))
    assert code == 0
    assert "particles: 13" in err and "electable: true" in err
    assert len(load(out)) == 13


def test_gen_circle_and_random(capsys):
    code, out, err = _run(capsys, "gen", "circle", "--radius", "1", "--layers", "1")
    assert code == 0 and len(json.loads(out)["particles"]) == 5
    code, out, _ = _run(capsys, "gen", "random", "--n", "1")
    assert json.loads(out)["particles"] == [[0, 0, 0]]
    code, out, _ = _run(capsys, "gen", "random", "--n", "12", "--electable", "--orient", "random", "--seed", "4")
    doc = json.loads(out)
    assert len(doc["particles"]) == 12 and len(doc["orientations"]) == 12


@pytest.mark.parametrize("argv", [
    ["gen", "rect", "3y3"],
    ["gen", "rect"],
    ["gen", "random"],
    ["gen", "circle", "--radius", "0"],
    ["gen", "hexagon"],
    ["elect"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = _run(capsys, *argv)
    assert code == 2


def test_check(capsys, tmp_path):
    good = _write(tmp_path, "g.json", [(0, 0, 0), (2, 0, 0)])
    code, out, _ = _run(capsys, "check", "--input", good)
    assert code == 0 and json.loads(out)["electable"] is True
    bad = _write(tmp_path, "b.json", BRIDGE)
    code, out, _ = _run(capsys, "check", "--input", bad)
    verdict = json.loads(out)
    assert code == 3 and verdict["failed_property"] == "a"


def test_elect_homog_line(capsys, tmp_path):
    path = _write(tmp_path, "l.json", [(-2, 0, 0), (0, 0, 0), (2, 0, 0)])
    trace = tmp_path / "t.jsonl"
    code, out, _ = _run(capsys, "elect", "--input", path, "--mode", "homog", "--trace-out", str(trace))
    doc = json.loads(out)
    assert code == 0 and doc["leader"] == [2, 0, 0] and doc["census"] == {"L": 1, "N": 2}
    assert json.loads(trace.read_text().splitlines()[0])["algorithm"] == "homog"


def test_elect_hetero_and_exit_codes(capsys, tmp_path):
    path = tmp_path / "r.json"
    _run(capsys, "gen", "rect", "3x3@0", "2x2@1", "--orient", "random", "--seed", "2", "--out", str(path))
    code, out, _ = _run(capsys, "elect", "--input", str(path), "--seed", "5")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "ok" and doc["rounds"] <= 13
    code, _, err = _run(capsys, "elect", "--input", str(path), "--mode", "homog")
    assert code == 2 and "identity" in err
    bridge = _write(tmp_path, "b.json", BRIDGE)
    code, out, _ = _run(capsys, "elect", "--input", bridge)
    assert code == 3 and json.loads(out)["status"] == "stall"
    line = _write(tmp_path, "l.json", [(-2, 0, 0), (0, 0, 0), (2, 0, 0)])
    code, out, _ = _run(capsys, "elect", "--input", line, "--mode", "homog", "--round-limit", "1")
    assert code == 4 and json.loads(out)["status"] == "timeout"
    apart = _write(tmp_path, "d.json", [(0, 0, 0), (4, 0, 0)])
    code, _, err = _run(capsys, "elect", "--input", apart)
    assert code == 2 and "connected" in err
    code, _, _ = _run(capsys, "elect", "--input", str(tmp_path / "missing.json"))
    assert code == 2


def test_ids(capsys, tmp_path):
    path = _write(tmp_path, "two.json", [(0, 0, 0), (2, 0, 0)])
    code, out, _ = _run(capsys, "ids", "--input", path, "--ell", "2", "--mode", "homog")
    doc = json.loads(out)
    assert code == 0 and doc["leader"] == [2, 0, 0]
    rows = {tuple(r["position"]): r for r in doc["particles"]}
    assert rows[(2, 0, 0)]["local_id"] == 0 and rows[(2, 0, 0)]["parent"] is None
    assert rows[(0, 0, 0)]["global_id"] == [-2, 0, 0]
    bridge = _write(tmp_path, "b.json", BRIDGE)
    code, _, err = _run(capsys, "ids", "--input", bridge)
    assert code == 3 and "election" in err
    code, _, _ = _run(capsys, "ids", "--input", path, "--ell", "0")
    assert code == 2


def test_render(capsys, tmp_path):
    path = tmp_path / "r.json"
    _run(capsys, "gen", "rect", "3x3@0", "2x2@1", "--out", str(path))
    code, out, _ = _run(capsys, "render", "--input", str(path))
    assert code == 0 and out.count("z = ") == 2
    code, out, _ = _run(capsys, "render", "--input", str(path), "--format", "svg", "--labels", "ids")
    assert out.startswith("<svg") and out.count("<g ") == 2
    trace = tmp_path / "t.jsonl"
    _run(capsys, "elect", "--input", str(path), "--trace-out", str(trace))
    code, out, _ = _run(capsys, "render", "--input", str(trace))
    assert code == 0 and out.count("L") == 1 and out.count("N") == 12
    code, out, _ = _run(capsys, "render", "--input", str(trace), "--format", "json")
    assert json.loads(out)["layers"] == [0, 1]


def test_traces_are_byte_identical(tmp_path, capsys):
    path = tmp_path / "r.json"
    _run(capsys, "gen", "random", "--n", "15", "--electable", "--orient", "random", "--seed", "3", "--out", str(path))
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    _run(capsys, "ids", "--input", str(path), "--seed", "9", "--trace-out", str(a))
    _run(capsys, "ids", "--input", str(path), "--seed", "9", "--trace-out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fccmatter", "gen", "random", "--n", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and len(json.loads(proc.stdout)["particles"]) == 3


def test_elect_predicate_flag(capsys, tmp_path):
    from test_heterogeneous import FOREIGN_CORNER

    path = _write(tmp_path, "f.json", FOREIGN_CORNER)
    code, out, _ = _run(capsys, "elect", "--input", path)
    assert code == 3
    code, out, _ = _run(capsys, "elect", "--input", path, "--predicate", "ports")
    assert code == 0 and json.loads(out)["census"] == {"L": 1, "N": 6}
