import subprocess
import sys

import pytest

from sigmaform.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_member_golden(capsys):
    assert run(capsys, "member", "--class", "prod(Gpi{s5},Gpi{s2})", "witness150") == (0, "No\n", "")


def test_member_several_groups(capsys):
    code, out, _ = run(capsys, "member", "--class", "gen(form,trivial,0,[S3])", "C4", "D6")
    assert code == 0 and out == "C4 No\nD6 Yes\n"


def test_member_explain(capsys):
    code, out, _ = run(capsys, "member", "--explain", "--class", "gen(form,trivial,0,[S3])", "C4")
    assert out.splitlines()[0] == "No"
    assert out.splitlines()[1].startswith("certificate ")


def test_analyze_trivial_group(capsys):
    code, out, _ = run(capsys, "analyze", "C1")
    assert code == 0
    assert "order 1\n" in out and "sigma(G) = {}\n" in out


def test_radical(capsys):
    code, out, _ = run(capsys, "radical", "--pi", "3", "S3")
    assert out == "O_{3}(G) order 3\nquotient C2 of order 2\n"
    code, out, _ = run(capsys, "radical", "--block", "s2", "--full", "S3")
    assert out.startswith("F_s2(G) order 6\n")


def test_sigma_file(capsys, tmp_path):
    cfg = tmp_path / "sigma.cfg"
    cfg.write_text("block s23: 2 3\n")
    assert run(capsys, "member", "--sigma", str(cfg), "--class", "Nsigma", "S4")[1] == "Yes\n"
    assert run(capsys, "member", "--class", "Nsigma", "S4")[1] == "No\n"


def test_function_file(capsys, tmp_path):
    f = tmp_path / "f.txt"
    f.write_text("default := one\n")
    code, out, _ = run(capsys, "member", "--function", f"f={f}", "--class", "lf(f)", "C6", "S3")
    assert out == "C6 Yes\nS3 No\n"


def test_group_manifest(capsys, tmp_path):
    m = tmp_path / "groups.txt"
    m.write_text("group W = affine(25,6)\n")
    code, out, _ = run(capsys, "member", "--groups", str(m), "--class", "Gpi{s2,s3,s5}", "W")
    assert (code, out) == (0, "Yes\n")


def test_define(capsys):
    code, out, _ = run(capsys, "define", "--gens", "S3")
    lines = out.splitlines()
    assert lines[1:4] == ["sigma s2 := gen(form, trivial, 0, [C1])", "sigma s3 := gen(form, trivial, 0, [C2])",
                          "default := empty"]


def test_joinmeet(capsys):
    code, out, _ = run(capsys, "joinmeet", "--lhs", "gen(form,trivial,0,[C2])", "--rhs", "gen(form,trivial,0,[C3])",
                       "--group", "C6")
    assert out.splitlines()[-1] == "C6 join=Yes meet=No"


def test_index(capsys):
    code, out, _ = run(capsys, "index", "--class", "Nsigma", "--nmax", "2")
    assert out.splitlines()[0] == "index >= 2 (checked to 2, on evidence)"


def test_universe_small_orders_are_complete(capsys):
    # every group of order at most 12 is present: 24 isomorphism types
    code, out, _ = run(capsys, "universe", "--bound", "12")
    assert out.startswith("universe bound 12: 24 groups")


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "l17")
    assert code == 0
    assert out.splitlines()[-1] == "CHECK l17 PASS checked=52 violations=0 gaps=0"
    assert out.count(": PASS") == 3


def test_verify_is_deterministic(capsys):
    first = run(capsys, "verify", "--suite", "t7")
    assert first == run(capsys, "verify", "--suite", "t7")
    assert first[2] == ""


@pytest.mark.parametrize("argv, message", [
    (["member", "--class", "meet()", "C2"], "line 1, column 6"),
    (["member", "--class", "Gpi{s2}", "Q9"], "quaternion"),
    (["member", "--sigma", "/nonexistent/sigma.cfg", "--class", "one", "C2"], "No such file"),
    (["verify", "--suite", "nope"], "unknown suite"),
    (["member", "--function", "nonsense", "--class", "one", "C2"], "NAME=FILE"),
])
def test_input_errors_exit_2(capsys, argv, message):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error: ") and message in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sigmaform", "member", "--class", "prod(Gpi{s5},Gpi{s2})",
                           "witness150"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "No\n"
    proc = subprocess.run([sys.executable, "-m", "sigmaform", "member", "--class", "meet()", "C2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2


def test_cached_run_matches_uncached(capsys, tmp_path):
    argv = ["verify", "--suite", "t1"]
    plain = run(capsys, *argv, "--no-cache")
    cold = run(capsys, *argv, "--cache-dir", str(tmp_path))
    warm = run(capsys, *argv, "--cache-dir", str(tmp_path))
    assert plain[1] == cold[1] == warm[1]
