"""Decay-class checks, Lemma-type sup-ratio checks, error sweeps and the Ingham comparison.

Asymptotic statements with unspecified constants are checked as trends:
a log-log slope against the envelope exponent, a rank correlation of
|error|/envelope against N, and a max/min spread of sup-ratios over a sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import spearmanr

from .convolution import LOG_BETA, POWER_DELTA, ConvolutionProblem, report
from .errors import DegenerateFitError, InvalidArgument
from .expansion import FiniteExpansion, dual_invert, expansion_coeffs
from .families import FamilySpec, build_fprime, parse_family
from .sieve import FLOAT, ArithTable, SieveTables, sigma_minus_one, to_kind

POWER = "power"
LOG = "log"
FPRIME_LOG = "fprime-log"
MODELS = (POWER, LOG, FPRIME_LOG)

FIT_POINTS = 256


@dataclass(frozen=True)
class TrendConfig:
    """Tolerances for sweep-level judgments. CLI flags override the defaults."""

    slope_slack: float = 0.15
    spearman_max: float = 0.8
    sup_ratio_max: float = 3.0
    tail: int = 5


# ---------------------------------------------------------------------------
# Coefficient decay fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of coefficient magnitudes to one decay model.

    ``exponent`` is the fitted slope in the model's coordinates (about
    -(1+δ) for ``power``, -α for ``log``, -β for ``fprime-log``), ``constant``
    is exp(intercept), and ``max_ratio`` is the sup of |a_r| over the fitted
    envelope with unit constant. The two are never the same number.
    """

    model: str
    exponent: float
    constant: float
    max_ratio: float
    sample_range: Tuple[int, int]
    n_points: int
    residual_rms: float


def _magnitudes(source) -> Tuple[np.ndarray, int]:
    if isinstance(source, FiniteExpansion):
        vals, n = source.coeffs, source.support
    elif isinstance(source, ArithTable):
        vals, n = source.values, source.n_max
    else:
        raise InvalidArgument("fit_decay needs a FiniteExpansion or ArithTable")
    return np.abs(np.asarray(to_kind(vals, FLOAT))), n


def fit_decay(source: Union[FiniteExpansion, ArithTable], model: str,
              r_min: Optional[int] = None, r_max: Optional[int] = None,
              points: int = FIT_POINTS) -> DecayFit:
    """Fit |a_r| to a decay model over a log-spaced sample of ``r_min..r_max``.

    Log spacing gives each scale equal weight; a uniform sample would be
    dominated by r close to the support, where finite-support effects sit.
    Log models start at r = 3 so that ln r > 1.
    """
    if model not in MODELS:
        raise InvalidArgument(f"unknown model {model!r} (choose from {', '.join(MODELS)})")
    mags, n = _magnitudes(source)
    if n < 16:
        raise InvalidArgument(f"support {n} too small to fit (need >= 16)")
    lo = r_min if r_min is not None else (1 if model == POWER else 3)
    hi = r_max if r_max is not None else n
    if model != POWER:
        lo = max(lo, 3)
    if not 1 <= lo < hi <= n:
        raise InvalidArgument(f"bad sample range {lo}..{hi} for support {n}")

    r = np.unique(np.geomspace(lo, hi, points).round().astype(np.int64))
    a = mags[r]
    keep = a > 0
    if np.count_nonzero(keep & (r > 1)) < 2:
        raise DegenerateFitError("fewer than two nonzero coefficients beyond r = 1")
    r, a = r[keep], a[keep]

    lr = np.log(r.astype(np.float64))
    if model == POWER:
        x, y = lr, np.log(a)
    elif model == LOG:
        x, y = np.log(lr), np.log(a) + lr
    else:
        x, y = np.log(lr), np.log(a)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    # envelope with unit constant, in the original coordinates
    max_ratio = float(np.max(np.exp(y - slope * x)))
    return DecayFit(model, float(slope), float(math.exp(intercept)), max_ratio,
                    (int(r[0]), int(r[-1])), len(r), float(np.sqrt(np.mean(resid ** 2))))


# ---------------------------------------------------------------------------
# Sup-ratio checks between f' and fhat decay classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lemma2Check:
    """Sup pair for one support N.

    forward:  A = sup |fhat(r)| r (ln r)^p,      B = sup |f'(d)| (ln d)^(p-1)
    backward: A = sup |f'(d)| (ln d)^p,          B = sup |fhat(r)| r (ln r)^(p-1)

    Sups run over 3 <= r, d <= N. ``ratio`` is B/A (0 when both vanish).
    """

    direction: str
    parameter: float
    N: int
    A: float
    B: float
    ratio: float


def _assert_dual(f_hat: FiniteExpansion, fprime: ArithTable) -> None:
    if fprime.n_max < f_hat.support:
        raise InvalidArgument(f"f' extent {fprime.n_max} below support {f_hat.support}")
    recomputed = np.asarray(to_kind(expansion_coeffs(fprime, f_hat.support).coeffs, FLOAT))
    given = np.asarray(to_kind(f_hat.coeffs, FLOAT))
    scale = max(1.0, float(np.max(np.abs(given))))
    if np.max(np.abs(recomputed - given)) > 1e-9 * scale:
        raise InvalidArgument("f_hat and f' are not a finite-expansion pair")


def _sup_pair(f_hat: FiniteExpansion, fprime: ArithTable, p: float, forward: bool):
    N = f_hat.support
    if N < 3:
        return 0.0, 0.0
    r = np.arange(3, N + 1, dtype=np.float64)
    lr = np.log(r)
    ch = np.abs(np.asarray(to_kind(f_hat.coeffs, FLOAT))[3:])
    fp = np.abs(np.asarray(to_kind(fprime.values, FLOAT))[3 : N + 1])
    if forward:
        return float(np.max(ch * r * lr ** p)), float(np.max(fp * lr ** (p - 1)))
    return float(np.max(fp * lr ** p)), float(np.max(ch * r * lr ** (p - 1)))


def _check(direction, f_hat, fprime, p):
    if p <= 1:
        raise InvalidArgument(f"{direction} check needs parameter > 1, got {p}")
    _assert_dual(f_hat, fprime)
    A, B = _sup_pair(f_hat, fprime, p, direction == "forward")
    if A == 0:
        ratio = 0.0 if B == 0 else math.inf
    else:
        ratio = B / A
    return Lemma2Check(direction, p, f_hat.support, A, B, ratio)


def lemma2_forward_check(f_hat: FiniteExpansion, fprime: ArithTable, alpha: float) -> Lemma2Check:
    """Sup pair for |fhat(r)| << 1/(r ln^α r)  =>  |f'(r)| << 1/ln^(α-1) r."""
    return _check("forward", f_hat, fprime, alpha)


def lemma2_backward_check(fprime: ArithTable, f_hat: FiniteExpansion, beta: float) -> Lemma2Check:
    """Sup pair for |f'(d)| << 1/ln^β d  =>  |fhat(r)| << 1/(r ln^(β-1) r)."""
    return _check("backward", f_hat, fprime, beta)


def log_coefficient_expansion(alpha: float, N: int, kind: str = FLOAT) -> FiniteExpansion:
    """fhat(r) = 1 / (r (1 + ln r)^α) on 1..N."""
    r = np.arange(N + 1, dtype=np.float64)
    r[0] = 1.0
    c = 1.0 / (r * (1.0 + np.log(r)) ** alpha)
    c[0] = 0.0
    return FiniteExpansion(N, to_kind(c, kind), kind, f"fhat-log:{alpha:g}")


def lemma2_sweep(direction: str, parameter: float, N_list: Sequence[int],
                 tables: SieveTables) -> List[Lemma2Check]:
    """Run one direction on its matched family for each N.

    forward uses fhat(r) = 1/(r (1+ln r)^α) and its dual f';
    backward uses the ``log:β`` family f' and its expansion.
    """
    out = []
    for N in sorted(N_list):
        if direction == "forward":
            fh = log_coefficient_expansion(parameter, N)
            out.append(lemma2_forward_check(fh, dual_invert(fh, tables), parameter))
        elif direction == "backward":
            fp = build_fprime(FamilySpec("log", parameter), N)
            out.append(lemma2_backward_check(fp, expansion_coeffs(fp, N), parameter))
        else:
            raise InvalidArgument(f"direction must be 'forward' or 'backward', got {direction!r}")
    return out


def sup_ratio_spread(checks: Sequence[Lemma2Check]) -> float:
    """Largest over smallest B/A across a sweep."""
    ratios = [c.ratio for c in checks]
    lo = min(ratios)
    if lo == 0:
        return 1.0 if max(ratios) == 0 else math.inf
    return max(ratios) / lo


# ---------------------------------------------------------------------------
# Error sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    N: int
    h: int
    brute_force: object
    main_term: object
    error: object
    envelope: Optional[float]
    ratio: Optional[float]


@dataclass(frozen=True)
class SweepResult:
    h: int
    f_label: str
    g_label: str
    bound_kind: Optional[str]
    parameter: Optional[float]
    rows: Tuple[SweepRow, ...]
    fitted_slope: Optional[float]
    envelope_slope: Optional[float]
    zero_error_rows: int = 0

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]


def _as_spec(fam) -> FamilySpec:
    return fam if isinstance(fam, FamilySpec) else parse_family(fam)


def infer_bound(fspec: FamilySpec, gspec: FamilySpec) -> Tuple[Optional[str], Optional[float]]:
    """Theorem envelope implied by the families, using the weaker of the two parameters."""
    names = {fspec.name, gspec.name}
    if names == {"power"}:
        return POWER_DELTA, min(fspec.param, gspec.param)
    if names == {"log"}:
        return LOG_BETA, min(fspec.param, gspec.param)
    return None, None


def envelope_slope(kind: Optional[str], parameter: Optional[float]) -> Optional[float]:
    """Leading power of N in the envelope; log factors are left to the slack."""
    if kind == POWER_DELTA:
        return 1.0 - parameter
    if kind == LOG_BETA:
        return 1.0
    return None


def _validate_grid(N_list: Sequence[int]) -> List[int]:
    Ns = [int(n) for n in N_list]
    if len(Ns) < 5:
        raise InvalidArgument(f"a sweep needs at least 5 N values, got {len(Ns)}")
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise InvalidArgument("N values must be strictly ascending")
    if Ns[0] < 2:
        raise InvalidArgument("N values must be >= 2")
    return Ns


def error_sweep(family_f, family_g, parameter: Optional[float], h: int,
                N_list: Sequence[int], tables: SieveTables, *,
                bound_kind: Optional[str] = None, backend: str = FLOAT,
                workers: int = 1) -> SweepResult:
    """Brute force vs main term for every N, plus the log-log slope of |error|.

    ``bound_kind``/``parameter`` default to what the families imply. Raises
    :class:`DegenerateFitError` (with the computed result on ``.result``) when
    fewer than three rows have nonzero error.
    """
    if h < 1:
        raise InvalidArgument(f"sweeps need h >= 1, got {h}")
    Ns = _validate_grid(N_list)
    if Ns[-1] + h > tables.n_max:
        raise InvalidArgument(f"sieve extent {tables.n_max} below max N + h = {Ns[-1] + h}")
    fs, gs = _as_spec(family_f), _as_spec(family_g)
    kind, par = infer_bound(fs, gs)
    if bound_kind is not None:
        kind = bound_kind
    if parameter is not None:
        par = parameter
    if kind is not None and par is None:
        raise InvalidArgument(f"bound kind {kind} needs a parameter")

    top = Ns[-1] + h
    fprime = build_fprime(fs, top, backend, tables)
    gprime = fprime if gs == fs else build_fprime(gs, top, backend, tables)

    def one(N):
        p = ConvolutionProblem.build(fprime, gprime, N, h)
        rep = report(p, kind, par, tables)
        return SweepRow(N, h, rep.brute_force, rep.main_term, rep.error, rep.bound, rep.ratio)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, Ns))
    else:
        rows = [one(N) for N in Ns]
    rows.sort(key=lambda r: r.N)

    nz = [(r.N, abs(float(r.error))) for r in rows if r.error != 0]
    slope = None
    if len(nz) >= 3:
        x = np.log([n for n, _ in nz])
        y = np.log([e for _, e in nz])
        slope = float(np.polyfit(x, y, 1)[0])
    result = SweepResult(h, fprime.label, gprime.label, kind, par, tuple(rows), slope,
                         envelope_slope(kind, par), len(rows) - len(nz))
    if slope is None:
        exc = DegenerateFitError(f"only {len(nz)} rows with nonzero error; slope undefined")
        exc.result = result
        raise exc
    return result


def tail_spearman(result: SweepResult, tail: int = 5) -> float:
    """Spearman correlation of |error|/envelope against N over the last ``tail`` rows."""
    rows = result.rows[-tail:]
    ratios = [r.ratio for r in rows]
    if any(x is None for x in ratios):
        raise InvalidArgument("sweep has no envelope; spearman trend undefined")
    if len(set(ratios)) == 1:
        return 0.0
    return float(spearmanr([r.N for r in rows], ratios).statistic)


def tail_ratio_spread(result: SweepResult, tail: int = 5) -> float:
    """max/min of |error|/envelope over the last ``tail`` rows."""
    ratios = [r.ratio for r in result.rows[-tail:]]
    if any(x is None for x in ratios):
        raise InvalidArgument("sweep has no envelope; ratio spread undefined")
    lo = min(ratios)
    return math.inf if lo == 0 else max(ratios) / lo


@dataclass(frozen=True)
class TrendVerdict:
    slope_ok: Optional[bool]
    spearman: Optional[float]
    spearman_ok: Optional[bool]
    ratio_spread: Optional[float]
    ratio_spread_ok: Optional[bool]

    @property
    def passed(self) -> bool:
        return all(v is not False for v in (self.slope_ok, self.spearman_ok, self.ratio_spread_ok))


def judge_sweep(result: SweepResult, config: TrendConfig = TrendConfig()) -> TrendVerdict:
    """Apply the trend checks that fit the sweep's envelope.

    Any envelope: slope <= envelope slope + slack, tail Spearman <= max.
    log-beta only: tail max/min of the ratio <= ``sup_ratio_max``.
    Checks that do not apply are ``None``.
    """
    slope_ok = sp = sp_ok = spread = spread_ok = None
    if result.envelope_slope is not None and result.fitted_slope is not None:
        slope_ok = result.fitted_slope <= result.envelope_slope + config.slope_slack
    if result.bound_kind is not None:
        sp = tail_spearman(result, config.tail)
        sp_ok = sp <= config.spearman_max
    if result.bound_kind == LOG_BETA:
        # N / ln^(β-2) N is the sharp scale here, so the ratio must also not collapse
        spread = tail_ratio_spread(result, config.tail)
        spread_ok = spread <= config.sup_ratio_max
    return TrendVerdict(slope_ok, sp, sp_ok, spread, spread_ok)


# ---------------------------------------------------------------------------
# Ingham's divisor-correlation asymptotic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InghamRow:
    N: int
    h: int
    lhs: int
    rhs: float
    ratio: float


def ingham_check(h: int, N_list: Sequence[int], tables: SieveTables) -> List[InghamRow]:
    """sum_{n<=N} d(n) d(n+h) against (6/pi^2) sigma_{-1}(h) N ln^2 N."""
    if h < 1:
        raise InvalidArgument(f"h must be >= 1, got {h}")
    Ns = sorted(int(n) for n in N_list)
    if not Ns or Ns[0] < 2:
        raise InvalidArgument("N values must be >= 2")
    if Ns[-1] + h > tables.n_max:
        raise InvalidArgument(f"sieve extent {tables.n_max} below max N + h = {Ns[-1] + h}")
    d = tables.divisor_count
    prods = d[1 : Ns[-1] + 1] * d[1 + h : Ns[-1] + h + 1]
    cums = np.cumsum(prods)
    s = float(sigma_minus_one(h))
    out = []
    for N in Ns:
        lhs = int(cums[N - 1])
        rhs = 6.0 / math.pi ** 2 * s * N * math.log(N) ** 2
        out.append(InghamRow(N, h, lhs, rhs, lhs / rhs))
    return out
