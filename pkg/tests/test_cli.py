from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pydot
import pytest

from scgrowth.cli import main

SURFACE = "generators: a b c d\nrelators:\na b a^-1 b^-1 c d c^-1 d^-1\n"
FREE = "generators: a b\nrelators:\n"
AB6 = "generators: a b\nrelators:\n(a b)^6\n"
BAD = "generators: a b\nrelators:\na^3 b\na^3 b^-1\n"
Q = "generators: a b\nrelators:\n(a^2 b^2)^3\n"


@pytest.fixture
def files(tmp_path: Path):
    out = {}
    for name, text in [("surface", SURFACE), ("free", FREE), ("ab6", AB6), ("bad", BAD), ("q", Q)]:
        p = tmp_path / f"{name}.txt"
        p.write_text(text)
        out[name] = str(p)
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def witness_lines(text):
    return [ln for ln in text.splitlines() if ln.startswith("WITNESS\t")]


def test_check(files, capsys):
    code, out, _ = run(capsys, "check", files["surface"], "--lambda", "1/6")
    assert code == 0 and "max piece: 1" in out
    code, out, _ = run(capsys, "check", files["bad"])
    assert code == 1
    (w,) = witness_lines(out)
    assert "piece=a^3" in w


def test_ball_tsv(files, capsys):
    code, out, _ = run(capsys, "ball", files["free"], "--radius", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# order")
    assert lines[1].split("\t") == ["n", "sphere", "ball", "root", "ratio"]
    assert [int(ln.split("\t")[2]) for ln in lines[2:]] == [1, 5, 17, 53]
    assert lines[2].split("\t")[3] == "NA"


def test_ball_budget(files, capsys):
    code, out, err = run(capsys, "ball", files["free"], "--radius", "8", "--budget", "100")
    assert code == 3 and "partial" in out and "budget" in err


def test_usage_errors(files, capsys):
    assert run(capsys, "ball", files["free"], "--radius", "3", "--nonsense")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "ball", "/nonexistent/file", "--radius", "2")[0] == 2
    assert run(capsys, "ball", files["bad"], "--radius", "2")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_reduce(files, capsys):
    code, out, _ = run(capsys, "reduce", files["ab6"], "(a b)^6")
    assert code == 0 and out.splitlines()[-1] == "e"
    code, out, _ = run(capsys, "reduce", files["ab6"], "(a b)^5")
    assert code == 1 and "b^-1 a^-1" in out and witness_lines(out)


def test_distance_and_geodesic(files, capsys):
    assert run(capsys, "distance", files["ab6"], "(a b)^4")[1].strip() == "4"
    code, out, _ = run(capsys, "geodesic", files["ab6"], "(a b)^4")
    assert code == 1 and witness_lines(out)
    code, out, _ = run(capsys, "geodesic", files["ab6"], "(a b)^3")
    assert code == 0


def test_automaton_export_blocks_and_p2(files, capsys):
    aut = files["dir"] / "ab6.aut"
    dot = files["dir"] / "ab6.dot"
    code, out, _ = run(capsys, "automaton", files["ab6"], "--radius", "10", "--rho", "4",
                       "--export", aut, "--dot", dot)
    assert code == 0 and "states: 13" in out
    pydot.graph_from_dot_data(dot.read_text())
    code, out, _ = run(capsys, "blocks", aut)
    assert code == 0 and "important" in out
    code, out, _ = run(capsys, "check-p2", aut, "--word", "(a^2 b^2)^3")
    assert code == 0 and "all important blocks good: True" in out
    code, out, _ = run(capsys, "automaton", files["ab6"], "--radius", "10", "--rho", "0")
    assert code == 1 and "WITNESS\tmismatch\tn=6" in out


def test_spectra_cli(files, capsys):
    m = files["dir"] / "m.txt"
    m.write_text("2\n1 1\n1 1\n")
    code, out, _ = run(capsys, "spectra", m, "--decrement", "1,1")
    assert code == 0 and "2 (exact)" in out and "certified: True" in out
    assert run(capsys, "spectra", m, "--decrement", "1")[0] == 2
    m.write_text("2\n1 1\n")
    assert run(capsys, "spectra", m)[0] == 2


def _free_aut(files, capsys):
    aut = files["dir"] / "free.aut"
    assert run(capsys, "automaton", files["free"], "--radius", "6", "--rho", "1", "--export", aut)[0] == 0
    return aut


def test_forbid_lemma3_corollary(files, capsys):
    aut = _free_aut(files, capsys)
    words = files["dir"] / "w.txt"
    words.write_text("(a b)^10\n")
    code, out, _ = run(capsys, "forbid", aut, "--words", words)
    assert code == 0 and "strictly smaller: True" in out
    code, out, _ = run(capsys, "lemma3", aut, "--words", words, "--N", "5")
    assert code == 0 and "verdict: pass" in out
    assert run(capsys, "lemma3", aut, "--words", words, "--N", "4")[0] == 2
    code, out, _ = run(capsys, "corollary1", aut, "--word", "(a^2 b^2)^15")
    assert code == 0 and "observational" in out
    assert run(capsys, "corollary1", aut, "--word", "a b")[0] == 2


def test_family_cli(files, capsys, tmp_path):
    rep = tmp_path / "r.txt"
    fig = tmp_path / "f.png"
    code, out, _ = run(capsys, "family", "--E", "2,5", "--c", "3", "--I", "1", "--J", "2", "--radius", "8",
                       "--report", rep, "--plot", fig)
    assert code == 0 and rep.read_text() == out and fig.stat().st_size > 0
    assert "[chain v2 <= v' < v1]" in out
    assert run(capsys, "family", "--E", "2,5", "--I", "1", "--J", "1", "--radius", "4")[0] == 2


def test_ball_plot(files, capsys, tmp_path):
    fig = tmp_path / "b.png"
    assert run(capsys, "ball", files["ab6"], "--radius", "7", "--plot", fig)[0] == 0
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_order_option(files, capsys):
    code, out, _ = run(capsys, "ball", files["free"], "--radius", "1", "--order", "b,b^-1,a,a^-1")
    assert code == 0 and out.startswith("# order bBaA")
    assert run(capsys, "ball", files["free"], "--radius", "1", "--order", "a,b")[0] == 2


def test_output_independent_of_workers(files):
    def cli(*extra):
        return subprocess.run([sys.executable, "-m", "scgrowth", "ball", files["q"], "--radius", "9", *extra],
                              capture_output=True, check=True).stdout
    assert cli() == cli("--workers", "3")
