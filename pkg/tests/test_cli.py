from __future__ import annotations

import json

from grig2.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_wordproblem(capsys):
    code, out = run(capsys, "wordproblem", "--group", "/012", "--word", "bcd")
    assert code == 0 and out.out.strip() == "trivial"
    code, out = run(capsys, "wordproblem", "--word", "abab")
    assert out.out.strip() == "nontrivial"


def test_witness(capsys):
    code, out = run(capsys, "witness", "--word", "b")
    assert code == 0 and "vertex=" in out.out
    code, out = run(capsys, "witness", "--word", "bcd")
    assert "trivial" in out.out


def test_growth_csv(capsys):
    code, out = run(capsys, "growth", "--group", "universal", "--radius", "4")
    lines = [l for l in out.out.splitlines() if not l.startswith("#")]
    assert lines[0] == "radius,count,ratio"
    assert lines[1].split(",")[:2] == ["0", "1"]
    assert lines[-1].split(",")[:2] == ["4", "41"]


def test_iterate_csv(capsys):
    code, out = run(capsys, "iterate", "--start", "1/5,1/5,1/5", "--steps", "60")
    lines = [l for l in out.out.splitlines() if not l.startswith("#")]
    assert lines[0] == "level,c0_num,c0_den,cA_num,cA_den,cg_num,cg_den,entropy"
    assert lines[2].split(",")[:7] == ["1", "12", "25", "2", "5", "1", "25"]
    assert len(lines) == 62


def test_induce_writes_files(tmp_path, capsys):
    out, js = tmp_path / "induce.csv", tmp_path / "mu.json"
    code, _ = run(capsys, "induce", "--blocks", "2000", "--out", str(out), "--json", str(js))
    assert code == 0
    assert "e,12/25," in out.read_text()
    assert {"word": "a", "mass_numerator": 2, "mass_denominator": 5} in json.loads(js.read_text())


def test_measure_input(tmp_path, capsys):
    m = tmp_path / "m.json"
    atoms = [("a", 1, 2), ("b", 1, 6), ("c", 1, 6), ("d", 1, 6)]
    m.write_text(json.dumps([{"word": w, "mass_numerator": p, "mass_denominator": q} for w, p, q in atoms]))
    code, out = run(capsys, "entropy-report", "--measure", str(m), "--kmax", "2")
    assert code == 0 and out.out.count("\n") == 4
    # unequal t-masses: the substitution does not apply, the raw computation does
    m.write_text(json.dumps([{"word": w, "mass_numerator": 1, "mass_denominator": 2} for w in "ab"]))
    code, out = run(capsys, "entropy-report", "--measure", str(m), "--kmax", "2")
    assert code == 2 and "unequal masses" in out.err
    code, out = run(capsys, "entropy-report", "--measure", str(m), "--kmax", "2", "--no-substitute")
    assert code == 0


def test_simulate_reproducible(capsys):
    args = ("simulate", "--steps", "3", "--paths", "3000", "--seed", "5")
    _, a = run(capsys, *args)
    _, b = run(capsys, *args, "--jobs", "2")
    assert a.out == b.out
    _, c = run(capsys, "simulate", "--steps", "3", "--paths", "3000", "--seed", "6")
    assert c.out != a.out


def test_simulate_trace_and_occupancy(capsys):
    code, out = run(capsys, "simulate", "--kind", "trace", "--paths", "1000")
    assert code == 0 and out.out.splitlines()[1] == "word,count,frequency,exact_mass"
    code, out = run(capsys, "simulate", "--kind", "occupancy", "--steps", "1000")
    assert code == 0 and "state,occupancy" in out.out


def test_interval_check(capsys):
    code, out = run(capsys, "interval-check", "--depth", "8", "--samples", "200")
    assert code == 0 and out.out.strip() == "a->a,b->d,c->c,d->b"


def test_folner(capsys):
    code, out = run(capsys, "folner", "--group", "/012", "--radius", "2")
    assert code == 0 and "radius,generator,ratio" in out.out


def test_errors_exit_nonzero(capsys):
    code, out = run(capsys, "wordproblem", "--word", "xyz")
    assert code == 2 and "error" in out.err
    code, out = run(capsys, "growth", "--radius", "50")
    assert code != 0


def test_selftest_subset(capsys):
    code, out = run(capsys, "selftest", "--only", "3,4")
    assert code == 0 and "2/2 criteria passed" in out.out
