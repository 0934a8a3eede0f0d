import io
import subprocess
import sys

import pytest

from refpoly import hull
from refpoly.cli import main, read_polytopes

QUINTIC_DUAL = "# quintic mirror\n5 4\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n-1 -1 -1 -1\n"


def run(args, stdin=""):
    out = io.StringIO()
    old = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        code = main(args, out=out)
    finally:
        sys.stdin = old
    return code, out.getvalue()


def test_delta_quartic():
    code, out = run(["delta"], "4 1 1 1 1\n")
    assert code == 0
    assert out.splitlines()[0] == "35 3"


def test_hodge_of_quintic_newton_polytope():
    _, block = run(["delta"], "5 1 1 1 1 1\n")
    assert run(["hodge"], block) == (0, "1 101\n")
    assert run(["hodge", "--chi"], block) == (0, "1 101 -200\n")


def test_comments_echoed():
    code, out = run(["hodge"], QUINTIC_DUAL)
    assert out == "# quintic mirror\n101 1\n"


def test_weights_enum_count():
    code, out = run(["weights-enum", "--nweights", "4", "--ip"])
    lines = out.splitlines()
    assert code == 0 and len(lines) == 95 and lines == sorted(set(lines), key=lines.index)
    assert run(["weights-enum", "--nweights", "4", "--ip"])[1] == out


def test_analyze_rows():
    _, out = run(["analyze", "--weights"], "12 1 1 4 6\n5 1 1 1 2\n")
    a, b = [dict(f.split("=") for f in line.split() if "=" in f) for line in out.splitlines()]
    assert (a["P"], a["V"], a["dualP"], a["dualV"], a["type"], a["F"]) == \
        ("39", "4", "9", "4", "r", "1")
    assert (b["P"], b["V"], b["dualP"], b["dualV"], b["type"]) == ("34", "6", "6", "5", "r")
    _, out = run(["analyze", "--weights", "--nweights", "5"], "3 1 1 1 0 0  3 1 0 0 1 1\n")
    c = dict(f.split("=") for f in out.split() if "=" in f)
    assert (c["P"], c["V"], c["dualP"], c["dualV"], c["type"]) == ("30", "5", "6", "5", "r")


def test_points_round_trip():
    _, block = run(["delta", "--vertices-only"], "6 1 2 3\n")
    _, pts = run(["points"], block)
    (_, P), = list(read_polytopes(io.StringIO(pts)))
    (_, V), = list(read_polytopes(io.StringIO(block)))
    assert set(P.vertices) == set(V.vertices)
    assert hull(P.lattice_points()) == P


def test_lattice_blocks():
    _, out = run(["lattices", "--check"], QUINTIC_DUAL)
    heads = [line for line in out.splitlines() if line.startswith("# index=")]
    assert len(heads) == 64


def test_per_record_errors_continue():
    bad = "3 2\n2 0\n0 2\n-2 -2\n"
    good = "3 2\n1 0\n0 1\n-1 -1\n"
    code, out = run(["dual"], bad + good)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("ERR ")
    assert lines[1] == "3 2"


def test_exit_codes(tmp_path):
    assert run(["nosuch"])[0] == 1
    assert run(["points"], "3 x\n")[0] == 2
    assert run(["points"], "3 2\n1 0\n")[0] == 2
    assert run(["points", str(tmp_path / "missing")])[0] == 3
    assert run(["classify", "--dim", "4"])[0] == 1


def test_fibrations():
    code, out = run(["fibrations", "--weights"], "12 1 1 4 6\n")
    lines = out.splitlines()
    assert lines[0] == "Pi=1 F=1"
    assert lines[1].startswith("fiber_dim=2 weights=1,2,3 base_rays=2")


def test_classify_dim2(tmp_path, monkeypatch):
    monkeypatch.setenv("REFPOLY_JOBS", "1")
    code, out = run(["classify", "--dim", "2", "--dump", "--resume", str(tmp_path / "c")])
    lines = out.splitlines()
    assert lines[:2] == ["classes 16", "connected yes"]
    blocks = list(read_polytopes(io.StringIO("\n".join(lines[2:]))))
    assert len(blocks) == 16 and all(P.is_reflexive() for _, P in blocks)


@pytest.mark.parametrize("cmd", [["reflexive"], ["normalform"], ["picard"]])
def test_simple_commands(cmd):
    code, out = run(cmd + ["--weights"], "4 1 1 1 1\n")
    assert code == 0 and out and not out.startswith("ERR")


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "refpoly.cli", "reflexive"],
                       input="3 2\n1 0\n0 1\n-1 -1\n", capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "reflexive\n"
