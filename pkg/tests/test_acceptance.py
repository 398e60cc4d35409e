"""Exit criteria. Each test prints one PASS/FAIL line in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from finite_ramanujan.cli import main
from finite_ramanujan.convolution import (
    ConvolutionProblem, brute_force, double_expansion, main_term, singular_series,
)
from finite_ramanujan.decay import (
    error_sweep, ingham_check, lemma2_sweep, sup_ratio_spread, tail_ratio_spread,
    tail_spearman,
)
from finite_ramanujan.expansion import evaluate, expansion_coeffs, truncate_support
from finite_ramanujan.families import FamilySpec, build_fprime
from finite_ramanujan.ramanujan import lemma1_indicator, ramanujan_sum, ramanujan_sum_direct
from finite_ramanujan.sieve import build_sieve, divisors

from conftest import ACCEPTANCE_LINES, random_exact_table

GRID_10_20 = [2**k for k in range(10, 21)]
GRID_10_16 = [2**k for k in range(10, 17)]


class Criterion:
    def __init__(self, number, title, limit_s):
        self.number, self.title, self.limit = number, title, limit_s

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.detail = ""
        self.ok = False
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        in_time = elapsed < self.limit
        passed = self.ok and exc_type is None and in_time
        note = self.detail if exc_type is None else f"{exc_type.__name__}: {exc}"
        ACCEPTANCE_LINES.append(
            f"[{'PASS' if passed else 'FAIL'}] criterion {self.number}: {self.title} "
            f"({elapsed:.1f}s / limit {self.limit}s) {note}")
        if exc_type is None:
            assert self.ok, note
            assert in_time, f"took {elapsed:.1f}s, limit {self.limit}s"
        return False


def test_1_exact_reconstruction():
    with Criterion(1, "exact reconstruction, 200 random tables, N <= 80", 10) as c:
        rng = random.Random(1)
        tables = build_sieve(80)
        checked = 0
        for _ in range(200):
            N = rng.randint(1, 80)
            fp = random_exact_table(rng, N)
            exp = expansion_coeffs(fp, N)
            for n in range(1, N + 1):
                want = sum((fp[d] for d in divisors(n, tables)), Fraction(0))
                assert evaluate(exp, n, tables) == want
                checked += 1
        c.detail = f"{checked} (table, n) pairs equal"
        c.ok = True


def test_2_oracle_equivalence():
    with Criterion(2, "c_r(n) Moebius form == root-of-unity oracle", 30) as c:
        tables = build_sieve(10**4)
        for r in range(1, 201):
            for n in range(0, 201):
                assert ramanujan_sum(r, n, tables) == ramanujan_sum_direct(r, n)
        for r in range(1, 10**4 + 1):
            assert ramanujan_sum(r, 1, tables) == tables.mobius[r]
        c.detail = "r<=200, 0<=n<=200 exhaustive; c_r(1)=mu(r) for r<=10^4"
        c.ok = True


def test_3_lemma1_indicator():
    with Criterion(3, "(1/d) sum_{r|d} c_r(n) = [d | n]", 10) as c:
        tables = build_sieve(300)
        for d in range(1, 301):
            for n in range(1, 301):
                assert lemma1_indicator(d, n, tables) == (1 if n % d == 0 else 0)
        c.detail = "d, n <= 300 exhaustive"
        c.ok = True


def test_4_double_expansion_equality():
    with Criterion(4, "brute force == double expansion", 60) as c:
        tables = build_sieve(60)
        fp = build_fprime(FamilySpec("divisor"), 6, "exact")
        p = ConvolutionProblem.build(fp, fp, 4, 2)
        assert brute_force(p, tables) == double_expansion(p, tables) == 24
        rng = random.Random(4)
        for _ in range(30):
            N, h = rng.randint(1, 40), rng.randint(1, 8)
            p = ConvolutionProblem.build(random_exact_table(rng, N), random_exact_table(rng, N + h), N, h)
            assert brute_force(p, tables) == double_expansion(p, tables)
        c.detail = "worked example = 24; 30 random problems equal"
        c.ok = True


def test_5_singular_series_rearrangement():
    with Criterion(5, "N * singular series == main term", 30) as c:
        tables = build_sieve(80)
        fp = build_fprime(FamilySpec("divisor"), 6, "exact")
        p = ConvolutionProblem.build(fp, fp, 4, 2)
        assert 4 * singular_series(p, tables) == main_term(p, tables) == 22
        rng = random.Random(5)
        for _ in range(50):
            N, h = rng.randint(1, 60), rng.randint(1, 12)
            p = ConvolutionProblem.build(random_exact_table(rng, N), random_exact_table(rng, N + h), N, h)
            assert p.N * singular_series(p, tables) == main_term(p, tables)
        c.detail = "worked example = 22; 50 random problems equal"
        c.ok = True


def test_6_truncation_neutrality():
    with Criterion(6, "brute force unchanged by support truncation", 30) as c:
        tables = build_sieve(120)
        rng = random.Random(6)
        for _ in range(50):
            N, h = rng.randint(1, 60), rng.randint(1, 12)
            ext = N + h + rng.randint(1, 40)
            fp, gp = random_exact_table(rng, ext), random_exact_table(rng, ext)
            # reference: f, g summed over all divisors present in the untruncated tables
            f = [sum((fp[d] for d in divisors(n, tables) if d <= ext), Fraction(0)) for n in range(1, N + 1)]
            g = [sum((gp[d] for d in divisors(m, tables) if d <= ext), Fraction(0))
                 for m in range(1 + h, N + h + 1)]
            untruncated = sum((a * b for a, b in zip(f, g)), Fraction(0))
            cut = ConvolutionProblem.build(truncate_support(fp, N), truncate_support(gp, N + h), N, h)
            assert brute_force(cut, tables) == untruncated
        c.detail = "50 random problems equal"
        c.ok = True


@pytest.fixture(scope="module")
def sweep_tables():
    return build_sieve(GRID_10_20[-1] + 1)


def test_7_theorem_power_trend(sweep_tables):
    with Criterion(7, "power-decay(0.5)^2 error slope and ratio trend", 300) as c:
        res = error_sweep("power:0.5", "power:0.5", 0.5, 1, GRID_10_20, sweep_tables)
        rho = tail_spearman(res, 5)
        c.detail = f"slope={res.fitted_slope:.3f} (<= 0.65), tail spearman={rho:.2f} (<= 0.8)"
        c.ok = res.fitted_slope <= 0.65 and rho <= 0.8


def test_8_theorem_log_trend(sweep_tables):
    with Criterion(8, "log-decay(3)^2 |error|/(N/ln N) bounded", 300) as c:
        res = error_sweep("log:3", "log:3", 3.0, 1, GRID_10_20, sweep_tables)
        for r in res.rows:
            assert r.envelope == pytest.approx(r.N / math.log(r.N))
        spread = tail_ratio_spread(res, 5)
        c.detail = f"max/min ratio over last 5 = {spread:.2f} (<= 3)"
        c.ok = spread <= 3


def test_9_ingham_ratio():
    with Criterion(9, "Ingham ratio at N = 10^6, h = 1", 120) as c:
        tables = build_sieve(10**6 + 1)
        lo, hi = ingham_check(1, [10**3, 10**6], tables)
        c.detail = f"ratio(10^3)={lo.ratio:.4f}, ratio(10^6)={hi.ratio:.4f}"
        c.ok = 0.5 < hi.ratio < 1.5 and abs(hi.ratio - 1) < abs(lo.ratio - 1)


def test_10_lemma2_sup_ratios():
    with Criterion(10, "forward/backward sup-ratio spread over 2^10..2^16", 180) as c:
        tables = build_sieve(GRID_10_16[-1])
        fwd = sup_ratio_spread(lemma2_sweep("forward", 2.0, GRID_10_16, tables))
        bwd = sup_ratio_spread(lemma2_sweep("backward", 3.0, GRID_10_16, tables))
        c.detail = f"forward spread={fwd:.3f}, backward spread={bwd:.3f} (<= 3)"
        c.ok = fwd <= 3 and bwd <= 3


def test_11_cli_determinism(tmp_path, capsys):
    with Criterion(11, "CLI byte-identical output and exit statuses", 60) as c:
        happy = [
            ["conv", "--f", "divisor", "--g", "divisor", "--N", "1000", "--h", "2", "--backend", "float"],
            ["sweep", "--f", "power:0.5", "--g", "power:0.5", "--h", "1",
             "--N", "1024,4096,16384,65536,262144"],
        ]
        for i, argv in enumerate(happy):
            for mode in ("csv", "json"):
                outs = []
                for k in range(2):
                    path = tmp_path / f"{i}-{mode}-{k}"
                    assert main(argv + ["--output", mode, "-o", str(path)]) == 0
                    outs.append(path.read_bytes())
                assert outs[0] == outs[1]
        errors = [
            ["conv", "--f", "log:1.5", "--theorem", "log-beta"],
            ["conv", "--f", "nosuchfamily"],
            ["sweep", "--f", "power:0.5", "--N", "4096,1024,16384,65536,262144"],
        ]
        codes = [main(argv) for argv in errors]
        capsys.readouterr()
        assert codes == [2, 2, 2]
        c.detail = "conv/sweep csv+json identical; usage errors exit 2"
        c.ok = True
