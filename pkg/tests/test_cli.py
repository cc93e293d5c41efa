import io
import math
import subprocess
import sys

import pytest

from xchannel import cli, sweep


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def field_lines(out):
    return {line.split()[0] + line.split()[1]: line.split() for line in out.splitlines() if line[:2] in ("A ", "B ", "C ")}


def test_eval_reference(capsys):
    code, out, _ = run(capsys, "eval", "--a2", "10", "--b2", "0.5", "--p1", "0.5", "--p2", "0.5", "--delta", "0.2")
    assert code == 0
    lines = out.splitlines()
    assert "region MixedR1 boundary=0" in lines
    assert "R_MAC,1 1.35021985907" in lines
    assert "best A1 1.4168531245" in lines
    assert lines[-1] == "delta 0.2 member=1 via A1,C1"
    rows = field_lines(out)
    assert rows["A1"][2:5] == ["1", "1.4168531245", "0.0666332654317"]
    assert rows["B1"][2] == "0" and "b²" in " ".join(rows["B1"][5:])
    assert all(rows[k][5:] == ["not", "in", "R₂"] for k in ("A2", "B2", "C2"))


def test_eval_zero_power(capsys):
    code, out, _ = run(capsys, "eval", "--a2", "1", "--b2", "1", "--p1", "0", "--p2", "0")
    assert code == 0
    assert "R_MAC,1 0" in out and "R_MAC,2 0" in out
    for row in field_lines(out).values():
        if row[2] == "1":
            assert row[4] == "0"


def test_eval_db_matches_linear(capsys):
    _, db_out, _ = run(capsys, "eval", "--a2", "10", "--b2", "0.5", "--p1", "-3", "--p2", "-3", "--db")
    p = repr(10 ** -0.3)
    _, lin_out, _ = run(capsys, "eval", "--a2", "10", "--b2", "0.5", "--p1", p, "--p2", p)
    assert db_out == lin_out
    assert "p1=0.501187233627" in db_out


def test_db_to_linear():
    assert cli.db_to_linear(0.0) == 1.0
    assert cli.db_to_linear(10.0) == 10.0
    assert cli.db_to_linear(-3.0) == pytest.approx(0.501187, abs=1e-6)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--a2", "10", "--b2", "0.5", "--p1", "-1", "--p2", "0.5"],
        ["eval", "--a2", "nan", "--b2", "0.5", "--p1", "1", "--p2", "0.5"],
        ["eval", "--a2", "10", "--b2", "0.5", "--p1", "1", "--p2", "0.5", "--delta", "0"],
        ["eval", "--a2", "10", "--p1", "1", "--p2", "0.5"],
        ["sweep", "--p1", "1", "--p2", "1", "--a2", "1:2"],
        ["sweep", "--p1", "1", "--p2", "1", "--a2", "2:1:3"],
        ["sweep", "--p1", "1", "--p2", "1", "--b2", "0:1:3", "--log"],
        ["curve", "--p1", "1", "--p2", "1", "--b2", "2"],
        ["curve", "--p1", "1", "--p2", "1", "--b2", "0.5", "--b", "0.5"],
        ["thresholds", "--delta", "0.1,-1"],
        ["thresholds", "--delta", "x"],
        ["delta", "--delta", "0.2", "--p1", "1", "--p2", "1", "--a2", "0.5"],
        ["verify", "--trials", "0"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        sys.exit(cli.main(argv))
    assert info.value.code == 1
    out, err = capsys.readouterr()
    assert out == "" and "error" in err


def test_no_partial_output_on_error(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, _, _ = run(capsys, "sweep", "--p1", "1", "--p2", "-1", "-o", str(target))
    assert code == 1 and not target.exists()
    code, _, _ = run(capsys, "curve", "--p1", "1", "--p2", "1", "--b2", "3", "-o", str(target))
    assert code == 1 and not target.exists()


def test_sweep_single_point_matches_eval(capsys):
    code, out, _ = run(capsys, "sweep", "--a2", "10:10:1", "--b2", "0.5:0.5:1", "--p1", "0.5", "--p2", "0.5", "--delta", "0.2")
    assert code == 0
    (rec,) = sweep.read_csv(io.StringIO(out))
    _, ev_out, _ = run(capsys, "eval", "--a2", "10", "--b2", "0.5", "--p1", "0.5", "--p2", "0.5", "--delta", "0.2")
    rows = field_lines(ev_out)
    for name, cells in rows.items():
        assert rec[f"{name}_applicable"] == (cells[2] == "1")
        if cells[3] != "-":
            assert sweep.fmt(rec[f"{name}_value_bits"]) == cells[3]
            assert sweep.fmt(rec[f"{name}_gap_bits"]) == cells[4]
    assert rec["best_kind"] == "A1" and rec["certifying_bounds"] == "A1|C1"


def test_sweep_file_output(tmp_path, capsys):
    target = tmp_path / "plane.csv"
    args = ["sweep", "--a2", "0:5:6", "--b2", "0:5:6", "--p1", "0.5", "--p2", "0.5"]
    code, out, _ = run(capsys, *args, "-o", str(target))
    assert code == 0 and out == ""
    _, stdout_copy, _ = run(capsys, *args)
    assert target.read_text() == stdout_copy
    assert len(stdout_copy.splitlines()) == 37


def test_sweep_workers_same_bytes(capsys):
    args = ["sweep", "--a2", "0.5:20:30", "--b2", "0:2:30", "--p1", "1", "--p2", "0.3", "--delta", "0.1"]
    _, one, _ = run(capsys, *args)
    _, many, _ = run(capsys, *args, "--workers", "3")
    assert one == many


def test_curve_output(capsys):
    code, out, _ = run(capsys, "curve", "--p1", "0.5", "--p2", "0.5", "--b", "0.75", "--a2", "1:100:200", "--log")
    assert code == 0
    recs = sweep.read_csv(io.StringIO(out))
    assert len(recs) == 200
    assert {r["gap_c"] for r in recs} == {float(sweep.fmt(0.5 * math.log2(1.28125)))}
    gaps = [r["gap_a"] for r in recs if r["gap_a"] is not None]
    assert gaps[-1] < 0.01 and all(g0 > g1 for g0, g1 in zip(gaps, gaps[1:]))


def test_thresholds_output(capsys):
    code, out, _ = run(capsys, "thresholds", "--delta", "0.1,0.2,0.5", "--p1", "0:10:101")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p1,delta,a2_threshold" and len(lines) == 304
    assert "0,0.1,1" in lines and "0.5,0.2,4.5973597201" in lines


def test_delta_output(capsys):
    code, out, _ = run(capsys, "delta", "--delta", "0.2", "--p1", "0.5", "--p2", "0.5")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "0.2 1 A a2> 4.5973597201"
    assert lines[2].startswith("0.2 1 B b2< 0.2175")
    assert lines[3].startswith("0.2 1 C b2< 0.639")
    assert len(lines) == 7


def test_delta_zero_power_is_unbounded(capsys):
    _, out, _ = run(capsys, "delta", "--delta", "0.2", "--p1", "0", "--p2", "0")
    assert "0.2 1 C b2< inf" in out and "0.2 1 A a2> 1" in out


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "50", "--seed", "7")
    assert code == 0
    assert out.splitlines()[-1] == "PASS"
    assert "oracle-equivalence 100 " in out


def test_verify_single_trial(capsys):
    for seed in range(3):
        code, _, _ = run(capsys, "verify", "--trials", "1", "--seed", str(seed))
        assert code == 0


def test_verify_perturbed_fails(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "10", "--seed", "0", "--perturb-etarho", "0.1")
    assert code == 2
    assert "zero-term" in out and "FAIL" in out
    assert "first failure in zero-term: a2=" in out


def test_verify_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--trials", "30", "--seed", "3")
    _, b, _ = run(capsys, "verify", "--trials", "30", "--seed", "3")
    assert a == b


def test_module_entry_point(tmp_path):
    argv = ["eval", "--a2", "10", "--b2", "0.5", "--p1", "0.5", "--p2", "0.5"]
    out = subprocess.run([sys.executable, "-m", "xchannel", *argv], capture_output=True, text=True)
    assert out.returncode == 0 and "best A1" in out.stdout
    bad = subprocess.run([sys.executable, "-m", "xchannel", "eval", "--a2", "x"], capture_output=True, text=True)
    assert bad.returncode == 1 and bad.stdout == ""
