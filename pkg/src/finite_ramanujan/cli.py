"""Command-line front end.

Subcommands: csum, expand, conv, sweep, ingham, decay. Exit status is 0 on
success, 1 on runtime or I/O failure, 2 on usage errors.

Examples::

    finite-ramanujan conv --f divisor --g divisor --N 4 --h 2 --backend exact
    finite-ramanujan sweep --f power:0.5 --g power:0.5 --h 1 \\
        --N 1024,4096,16384,65536,262144 --output csv -o sweep.csv
    finite-ramanujan ingham --h 1 --N 1000,10000,100000,1000000
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import List, Optional, Sequence

from . import __version__
from .convolution import (
    BOUND_KINDS, LOG_BETA, POWER_DELTA, ConvolutionProblem, ConvolutionReport,
    report, theorem_bound,
)
from .decay import (
    MODELS, DecayFit, InghamRow, Lemma2Check, SweepResult, SweepRow, TrendConfig,
    error_sweep, fit_decay, infer_bound, ingham_check, judge_sweep, lemma2_sweep,
    sup_ratio_spread,
)
from .errors import DegenerateFitError, InvalidArgument
from .expansion import expansion_coeffs
from .families import FamilySpec, build_fprime, parse_family
from .ramanujan import cr_row, ramanujan_sum
from .sieve import EXACT, FLOAT, build_sieve

EXACT_GUARD = 10**4
SWEEP_COLUMNS = ("N", "h", "brute_force", "main_term", "error", "envelope", "ratio")


@dataclass
class RunConfig:
    subcommand: str
    n_max: int
    h: int = 1
    f: Optional[FamilySpec] = None
    g: Optional[FamilySpec] = None
    N_list: List[int] = field(default_factory=list)
    backend: str = FLOAT
    output: str = "human"
    output_path: Optional[str] = None
    theorem: Optional[str] = None
    parameter: Optional[float] = None
    trend: TrendConfig = TrendConfig()
    r: Optional[int] = None
    n: Optional[int] = None
    r_max: Optional[int] = None
    model: Optional[str] = None
    lemma2: Optional[str] = None
    limit: Optional[int] = None
    workers: int = 1
    allow_large_exact: bool = False
    strict: bool = False
    seed: Optional[int] = None


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _int_list(text: str) -> List[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError(f"N values must be positive integers, got {text!r}")
    return vals


def _family(text: str) -> FamilySpec:
    try:
        return parse_family(text)
    except InvalidArgument as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=int, help="sieve extent (default: max N + h)")
    common.add_argument("--backend", choices=(EXACT, FLOAT), default=FLOAT)
    common.add_argument("--output", choices=("human", "csv", "json"), default="human")
    common.add_argument("-o", "--output-path", help="write output here instead of stdout")
    common.add_argument("--allow-large-exact", action="store_true",
                        help=f"lift the exact-backend guard N <= {EXACT_GUARD}")
    common.add_argument("--seed", type=int, help="reserved for randomized diagnostics")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--f", type=_family, default=FamilySpec("divisor"),
                     help="family for f: unit | divisor | power:δ | log:β | custom:<path>")
    fam.add_argument("--g", type=_family, default=None, help="family for g (default: same as f)")

    thm = argparse.ArgumentParser(add_help=False)
    thm.add_argument("--theorem", choices=BOUND_KINDS + ("none",),
                     help="error envelope (default: inferred from the families)")
    thm.add_argument("--param", type=float, help="δ or β for the envelope (default: from the families)")

    trend = argparse.ArgumentParser(add_help=False)
    d = TrendConfig()
    trend.add_argument("--slope-slack", type=float, default=d.slope_slack)
    trend.add_argument("--spearman-max", type=float, default=d.spearman_max)
    trend.add_argument("--sup-ratio-max", type=float, default=d.sup_ratio_max)
    trend.add_argument("--tail", type=int, default=d.tail)
    trend.add_argument("--strict", action="store_true", help="exit 1 when a trend check fails")

    parser = argparse.ArgumentParser(prog="finite-ramanujan",
                                     description="Finite Ramanujan expansions and shifted convolution sums.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("csum", parents=[common], help="Ramanujan sums c_r(n) or a row c_r(h)")
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--h", type=int)
    p.add_argument("--r-max", type=int)

    p = sub.add_parser("expand", parents=[common, fam], help="finite Ramanujan coefficients of f")
    p.add_argument("--N", type=_int_list, required=True)
    p.add_argument("--limit", type=int, help="print only r <= limit")

    p = sub.add_parser("conv", parents=[common, fam, thm], help="one shifted convolution report")
    p.add_argument("--N", type=_int_list, default=[1000])
    p.add_argument("--h", type=int, default=1)

    p = sub.add_parser("sweep", parents=[common, fam, thm, trend], help="error scaling over an N grid")
    p.add_argument("--N", type=_int_list, required=True)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("ingham", parents=[common], help="divisor correlation vs Ingham's asymptotic")
    p.add_argument("--N", type=_int_list, required=True)
    p.add_argument("--h", type=int, default=1)

    p = sub.add_parser("decay", parents=[common, fam, trend], help="coefficient decay fits and sup-ratio checks")
    p.add_argument("--N", type=_int_list, required=True)
    p.add_argument("--model", choices=MODELS, default="power")
    p.add_argument("--lemma2", choices=("forward", "backward"),
                   help="run the f'/fhat sup-ratio check over the N grid instead of a fit")
    p.add_argument("--param", type=float, help="α (forward) or β (backward)")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse and validate ``argv``; usage problems exit with status 2."""
    parser = build_parser()
    a = parser.parse_args(argv)
    sub = a.subcommand
    err = parser.error

    Ns = getattr(a, "N", None) or []
    if any(b <= x for x, b in zip(Ns, Ns[1:])):
        err("--N: values must be strictly ascending")
    h = getattr(a, "h", None)
    if h is not None and h < 0:
        err("--h: must be >= 0")
    if sub in ("sweep", "ingham") and h < 1:
        err("--h: must be >= 1 for sweep/ingham")
    if sub == "conv" and len(Ns) != 1:
        err("--N: conv takes a single N")

    f = getattr(a, "f", None)
    g = getattr(a, "g", None) or f
    theorem, param = None, None
    if sub in ("conv", "sweep"):
        theorem = None if a.theorem == "none" else a.theorem
        param = a.param
        if theorem is not None:
            if param is None:
                k, par = infer_bound(f, g)
                if k == theorem:
                    param = par
                elif f.param is not None:
                    param = min(x.param for x in (f, g) if x.param is not None)
                else:
                    err(f"--theorem {theorem}: families carry no parameter; pass --param")
            if theorem == LOG_BETA and param <= 2:
                err(f"--theorem log-beta needs β > 2 (got {param:g})")
            if theorem == POWER_DELTA and param <= 0:
                err(f"--theorem power-delta needs δ > 0 (got {param:g})")
            if sub == "conv" and h == 0:
                err("--theorem: envelopes assume h >= 1")
        elif a.theorem is None:
            k, par = infer_bound(f, g)
            if param is not None:
                par = param
            if k is not None and par is not None:
                try:
                    theorem_bound(k, par, 2, 1)
                    theorem, param = k, par
                except InvalidArgument:
                    pass  # families outside the hypothesis: report without an envelope

    if sub == "decay":
        if a.lemma2 is not None:
            if a.param is None:
                err("--lemma2 needs --param")
            if a.param <= 1:
                err("--param: must be > 1 for --lemma2")
        elif len(Ns) != 1:
            err("--N: decay fits take a single N")
        param = a.param

    if sub == "csum":
        if a.r is not None and a.n is not None:
            if a.r < 1 or a.n < 0:
                err("--r must be >= 1 and --n >= 0")
            need = a.r
        elif a.h is not None and a.r_max is not None:
            if a.r_max < 1:
                err("--r-max must be >= 1")
            need = a.r_max
        else:
            err("csum needs either --r and --n, or --h and --r-max")
        n_max = a.n_max if a.n_max is not None else need
        if n_max < need:
            err(f"--n-max {n_max} below required {need}")
    else:
        need = max(Ns) + (h or 0)
        n_max = a.n_max if a.n_max is not None else need
        if n_max < need:
            err(f"--n-max {n_max} below max(N) + h = {need}")

    if a.backend == EXACT and Ns and max(Ns) > EXACT_GUARD and not a.allow_large_exact:
        err(f"--backend exact limited to N <= {EXACT_GUARD}; pass --allow-large-exact to override")

    trend = TrendConfig()
    if hasattr(a, "slope_slack"):
        trend = TrendConfig(a.slope_slack, a.spearman_max, a.sup_ratio_max, a.tail)

    return RunConfig(
        subcommand=sub, n_max=n_max, h=h if h is not None else 0, f=f, g=g, N_list=list(Ns),
        backend=a.backend, output=a.output, output_path=a.output_path,
        theorem=theorem, parameter=param, trend=trend,
        r=getattr(a, "r", None), n=getattr(a, "n", None), r_max=getattr(a, "r_max", None),
        model=getattr(a, "model", None), lemma2=getattr(a, "lemma2", None),
        limit=getattr(a, "limit", None), workers=getattr(a, "workers", 1),
        allow_large_exact=a.allow_large_exact, strict=getattr(a, "strict", False), seed=a.seed,
    )


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def fmt(v) -> str:
    """12 significant digits for floats, ``p/q`` for rationals, empty for None."""
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    try:
        return f"{float(v):.12g}"
    except (TypeError, ValueError):
        return str(v)


def _jsonable(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else fmt(v)
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return float(fmt(v))
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    try:
        return float(fmt(v))
    except (TypeError, ValueError):
        return str(v)


def _unjson(v):
    if isinstance(v, str) and "/" in v:
        try:
            return Fraction(v)
        except ValueError:
            return v
    return v


def _table(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(header)] + [[fmt(x) for x in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    out = [",".join(header)]
    out += [",".join(fmt(x) for x in row) for row in rows]
    return "\n".join(out) + "\n"


def _report_row(rep: ConvolutionReport):
    return (rep.N, rep.h, rep.brute_force, rep.main_term, rep.error, rep.bound, rep.ratio)


def _sweep_row(r: SweepRow):
    return tuple(getattr(r, c) for c in SWEEP_COLUMNS)


def to_json_obj(obj, extra: Optional[dict] = None) -> dict:
    if isinstance(obj, ConvolutionReport):
        d = {"type": "conv", **asdict(obj)}
    elif isinstance(obj, SweepResult):
        d = {"type": "sweep", **{f.name: getattr(obj, f.name) for f in fields(obj) if f.name != "rows"}}
        d["rows"] = [asdict(r) for r in obj.rows]
    elif isinstance(obj, list) and obj and isinstance(obj[0], InghamRow):
        d = {"type": "ingham", "rows": [asdict(r) for r in obj]}
    elif isinstance(obj, list) and obj and isinstance(obj[0], Lemma2Check):
        d = {"type": "lemma2", "rows": [asdict(r) for r in obj], "spread": sup_ratio_spread(obj)}
    elif isinstance(obj, DecayFit):
        d = {"type": "decay", **asdict(obj)}
    elif isinstance(obj, dict):
        d = dict(obj)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    if extra:
        d.update(extra)
    return _jsonable(d)


def parse_json(text: str):
    """Inverse of the JSON emitter for conv and sweep payloads."""
    d = json.loads(text)
    kind = d.get("type")
    if kind == "conv":
        return ConvolutionReport(**{f.name: _unjson(d[f.name]) for f in fields(ConvolutionReport)})
    if kind == "sweep":
        rows = tuple(SweepRow(**{k: _unjson(v) for k, v in r.items()}) for r in d["rows"])
        kw = {f.name: _unjson(d[f.name]) for f in fields(SweepResult) if f.name != "rows"}
        return SweepResult(rows=rows, **kw)
    raise ValueError(f"unsupported payload type {kind!r}")


def emit(obj, config: RunConfig, extra: Optional[dict] = None) -> str:
    """Serialise a result per ``config.output`` and write it to the configured sink.

    Returns the serialised text.
    """
    mode = config.output
    if mode == "json":
        text = json.dumps(to_json_obj(obj, extra), indent=2, sort_keys=False) + "\n"
    elif mode == "csv":
        text = _csv(*_tabular(obj))
    else:
        text = _human(obj, extra)
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _tabular(obj):
    if isinstance(obj, ConvolutionReport):
        return SWEEP_COLUMNS, [_report_row(obj)]
    if isinstance(obj, SweepResult):
        return SWEEP_COLUMNS, [_sweep_row(r) for r in obj.rows]
    if isinstance(obj, list) and obj and isinstance(obj[0], InghamRow):
        return ("N", "h", "lhs", "rhs", "ratio"), [(r.N, r.h, r.lhs, r.rhs, r.ratio) for r in obj]
    if isinstance(obj, list) and obj and isinstance(obj[0], Lemma2Check):
        return (("direction", "parameter", "N", "A", "B", "ratio"),
                [(r.direction, r.parameter, r.N, r.A, r.B, r.ratio) for r in obj])
    if isinstance(obj, DecayFit):
        return (("model", "exponent", "constant", "max_ratio", "r_min", "r_max", "n_points"),
                [(obj.model, obj.exponent, obj.constant, obj.max_ratio,
                  obj.sample_range[0], obj.sample_range[1], obj.n_points)])
    if isinstance(obj, dict) and "header" in obj:
        return obj["header"], obj["rows"]
    raise TypeError(f"cannot tabulate {type(obj).__name__}")


def _human(obj, extra: Optional[dict]) -> str:
    if isinstance(obj, ConvolutionReport):
        lines = [f"f = {obj.f_label}, g = {obj.g_label}, N = {obj.N}, h = {obj.h}",
                 f"  brute force : {fmt(obj.brute_force)}",
                 f"  main term   : {fmt(obj.main_term)}",
                 f"  error       : {fmt(obj.error)}"]
        if obj.bound is not None:
            lines += [f"  envelope    : {fmt(obj.bound)}  ({obj.bound_kind}, parameter {fmt(obj.parameter)})",
                      f"  ratio       : {fmt(obj.ratio)}"]
        text = "\n".join(lines)
    else:
        header, rows = _tabular(obj)
        text = _table(header, rows)
        if isinstance(obj, SweepResult):
            text += (f"\nfitted slope    : {fmt(obj.fitted_slope)}"
                     f"\nenvelope slope  : {fmt(obj.envelope_slope)}"
                     f"\nzero-error rows : {obj.zero_error_rows}")
    if extra:
        text += "\n" + "\n".join(f"{k:<16}: {fmt(v) if not isinstance(v, str) else v}"
                                 for k, v in extra.items())
    return text + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _run_csum(cfg: RunConfig):
    tables = build_sieve(cfg.n_max)
    if cfg.r is not None and cfg.n is not None:
        return {"header": ("r", "n", "c"), "rows": [(cfg.r, cfg.n, ramanujan_sum(cfg.r, cfg.n, tables))]}, None
    row = cr_row(cfg.h, cfg.r_max, tables)
    return {"header": ("r", "h", "c"), "rows": [(r, cfg.h, v) for r, v in enumerate(row.tolist(), 1)]}, None


def _run_expand(cfg: RunConfig):
    N = cfg.N_list[-1]
    tables = build_sieve(cfg.n_max)
    fp = build_fprime(cfg.f, cfg.n_max, cfg.backend, tables)
    exp = expansion_coeffs(fp, N)
    top = N if cfg.limit is None else min(cfg.limit, N)
    return {"header": ("r", "fhat"), "rows": [(r, exp[r]) for r in range(1, top + 1)]}, None


def _run_conv(cfg: RunConfig):
    N = cfg.N_list[0]
    tables = build_sieve(cfg.n_max)
    fp = build_fprime(cfg.f, N + cfg.h, cfg.backend, tables)
    gp = fp if cfg.g == cfg.f else build_fprime(cfg.g, N + cfg.h, cfg.backend, tables)
    p = ConvolutionProblem.build(fp, gp, N, cfg.h)
    return report(p, cfg.theorem, cfg.parameter, tables), None


def _run_sweep(cfg: RunConfig):
    tables = build_sieve(cfg.n_max)
    try:
        res = error_sweep(cfg.f, cfg.g, cfg.parameter, cfg.h, cfg.N_list, tables,
                          bound_kind=cfg.theorem, backend=cfg.backend, workers=cfg.workers)
    except DegenerateFitError as exc:
        return exc.result, {"verdict": "PASS-trivial (all or nearly all errors are exactly zero)"}
    v = judge_sweep(res, cfg.trend)
    extra = {"slope_ok": v.slope_ok, "spearman_tail": v.spearman, "spearman_ok": v.spearman_ok,
             "ratio_spread_tail": v.ratio_spread, "ratio_spread_ok": v.ratio_spread_ok,
             "verdict": "PASS" if v.passed else "FAIL"}
    return res, extra


def _run_ingham(cfg: RunConfig):
    tables = build_sieve(cfg.n_max)
    return ingham_check(cfg.h, cfg.N_list, tables), None


def _run_decay(cfg: RunConfig):
    tables = build_sieve(cfg.n_max)
    if cfg.lemma2:
        checks = lemma2_sweep(cfg.lemma2, cfg.parameter, cfg.N_list, tables)
        spread = sup_ratio_spread(checks)
        ok = spread <= cfg.trend.sup_ratio_max
        return checks, {"spread": spread, "verdict": "PASS" if ok else "FAIL"}
    N = cfg.N_list[0]
    fp = build_fprime(cfg.f, N, cfg.backend, tables)
    source = fp if cfg.model == "fprime-log" else expansion_coeffs(fp, N)
    return fit_decay(source, cfg.model), None


RUNNERS = {
    "csum": _run_csum, "expand": _run_expand, "conv": _run_conv,
    "sweep": _run_sweep, "ingham": _run_ingham, "decay": _run_decay,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        obj, extra = RUNNERS[cfg.subcommand](cfg)
        emit(obj, cfg, extra)
    except (OSError, ValueError, ArithmeticError, IndexError) as exc:
        print(f"finite-ramanujan: error: {exc}", file=sys.stderr)
        return 1
    if cfg.strict and extra and extra.get("verdict") == "FAIL":
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
