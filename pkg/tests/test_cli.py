import json
import subprocess
import sys
from fractions import Fraction

import pytest

from finite_ramanujan.cli import RunConfig, emit, fmt, main, parse_config, parse_json
from finite_ramanujan.convolution import LOG_BETA, POWER_DELTA, ConvolutionProblem, report
from finite_ramanujan.decay import error_sweep
from finite_ramanujan.families import FamilySpec, build_fprime
from finite_ramanujan.sieve import build_sieve


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_conv_happy_path():
    cfg = parse_config("conv --f divisor --g divisor --N 1000 --h 2 --backend float --output json".split())
    assert cfg.subcommand == "conv" and cfg.N_list == [1000] and cfg.h == 2
    assert cfg.f == FamilySpec("divisor") and cfg.output == "json" and cfg.n_max == 1002
    assert cfg.theorem is None


def test_parse_sweep_happy_path():
    cfg = parse_config("sweep --f power:0.5 --g power:0.5 --h 1 --N 1024,4096,16384,65536,262144".split())
    assert cfg.N_list == [1024, 4096, 16384, 65536, 262144]
    assert cfg.theorem == POWER_DELTA and cfg.parameter == 0.5


@pytest.mark.parametrize("argv", [
    "conv --f log:1.5 --theorem log-beta",
    "conv --f bogus",
    "sweep --f power:0.5 --N 4096,1024,16384,65536,262144",
    "conv --f divisor --N 20000 --backend exact",
    "conv --f divisor --N 100 --h 1 --n-max 50",
    "csum --r 3",
    "decay --lemma2 forward --N 1024,2048",
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        parse_config(argv.split())
    assert exc.value.code == 2


def test_exact_guard_override():
    cfg = parse_config("conv --f divisor --N 20000 --backend exact --allow-large-exact".split())
    assert cfg.backend == "exact"


def test_log_family_below_hypothesis_reports_without_envelope():
    cfg = parse_config("conv --f log:1.5 --N 100".split())
    assert cfg.theorem is None


def test_human_worked_example(capsys):
    code, out, _ = run("conv --f divisor --g divisor --N 4 --h 2 --backend exact".split(), capsys)
    assert code == 0
    assert "brute force : 24" in out and "main term   : 22" in out and "error       : 2" in out


def test_csv_unit_row(capsys):
    code, out, _ = run("conv --f unit --g unit --N 10 --h 1 --output csv".split(), capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,h,brute_force,main_term,error,envelope,ratio"
    assert lines[1].startswith("10,1,10,10,0,")


def test_sweep_csv_columns(capsys):
    code, out, _ = run("sweep --f power:0.5 --h 1 --N 256,512,1024,2048,4096 --output csv".split(), capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,h,brute_force,main_term,error,envelope,ratio"
    assert [int(l.split(",")[0]) for l in lines[1:]] == [256, 512, 1024, 2048, 4096]


def test_fmt_rules():
    assert fmt(Fraction(3, 4)) == "3/4" and fmt(Fraction(6, 3)) == "2"
    assert fmt(1 / 3) == "0.333333333333" and fmt(None) == "" and fmt(7) == "7"


def _cfg(mode, path=None):
    return RunConfig(subcommand="conv", n_max=10, output=mode, output_path=path)


def test_json_roundtrip_exact(capsys):
    t = build_sieve(40)
    fp = build_fprime(FamilySpec("divisor"), 40, "exact")
    rep = report(ConvolutionProblem.build(fp, fp, 30, 4), None, None, t)
    assert parse_json(emit(rep, _cfg("json"))) == rep
    capsys.readouterr()


def test_json_roundtrip_float(capsys):
    t = build_sieve(2000)
    res = error_sweep("log:3", "log:3", None, 1, [100, 200, 400, 800, 1600], t)
    text = emit(res, _cfg("json"))
    back = parse_json(text)
    assert emit(back, _cfg("json")) == text
    assert back.rows[2].N == 400 and back.bound_kind == LOG_BETA
    assert back.fitted_slope == pytest.approx(res.fitted_slope, rel=1e-11)
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    "conv --f power:0.5 --g log:3 --N 5000 --h 3",
    "sweep --f log:3 --g log:3 --h 2 --N 256,1024,4096,16384,65536",
])
@pytest.mark.parametrize("mode", ["csv", "json"])
def test_byte_identical_output(tmp_path, argv, mode):
    paths = [tmp_path / f"run{i}.{mode}" for i in range(2)]
    for p in paths:
        assert main(argv.split() + ["--output", mode, "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert b"\r\n" not in paths[0].read_bytes()


def test_unwritable_path_exits_1(tmp_path, capsys):
    code, _, err = run(["conv", "--f", "unit", "--N", "5", "-o", str(tmp_path / "no" / "x.csv")], capsys)
    assert code == 1 and "error" in err


def test_bad_custom_file_exits_1(tmp_path, capsys):
    p = tmp_path / "c.csv"
    p.write_text("fprime\n1,1\n1,2\n")
    code, _, err = run(["conv", "--f", f"custom:{p}", "--N", "5"], capsys)
    assert code == 1 and "line 3" in err


def test_other_subcommands(capsys):
    code, out, _ = run("csum --r 4 --n 2 --output csv".split(), capsys)
    assert code == 0 and out.splitlines()[1] == "4,2,-2"
    code, out, _ = run("csum --h 0 --r-max 5 --output csv".split(), capsys)
    assert [l.split(",")[2] for l in out.splitlines()[1:]] == ["1", "1", "2", "2", "4"]
    code, out, _ = run("expand --f divisor --N 4 --backend exact --output csv".split(), capsys)
    assert out.splitlines()[1:] == ["1,25/12", "2,3/4", "3,1/3", "4,1/4"]
    code, out, _ = run("ingham --h 2 --N 4 --output csv".split(), capsys)
    assert out.splitlines()[1].startswith("4,2,24,")
    code, out, _ = run("decay --f power:1 --N 10000 --output json".split(), capsys)
    assert code == 0 and -2.2 < json.loads(out)["exponent"] < -1.8
    code, out, _ = run("decay --lemma2 backward --param 3 --N 1024,2048,4096".split(), capsys)
    assert code == 0 and "PASS" in out
    code, out, _ = run("sweep --f unit --g unit --N 10,20,30,40,50".split(), capsys)
    assert code == 0 and "PASS-trivial" in out


def test_module_entry_point_exit_codes():
    ok = subprocess.run([sys.executable, "-m", "finite_ramanujan", "conv", "--f", "unit", "--N", "3"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    bad = subprocess.run([sys.executable, "-m", "finite_ramanujan", "conv", "--f", "log:1.5",
                          "--theorem", "log-beta"], capture_output=True, text=True)
    assert bad.returncode == 2 and "β > 2" in bad.stderr
