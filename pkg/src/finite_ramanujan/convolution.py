"""Shifted convolution sums sum_{n<=N} f(n) g(n+h), computed three ways.

- :func:`brute_force` materialises f on 1..N and g on 1..N+h from f', g'.
- :func:`double_expansion` substitutes both finite Ramanujan expansions and
  sums c_r(n) c_s(n+h) over n (cubic cost, small N only).
- :func:`main_term` is N * sum_r fhat(r) ghat(r) c_r(h); :func:`singular_series`
  is the same quantity divided by N, assembled over divisors l | h.

f is expanded relative to N and g relative to N + h.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgument, SizeLimitError
from .expansion import FiniteExpansion, expansion_coeffs, truncate_support
from .ramanujan import cr_row
from .sieve import (
    EXACT, ArithTable, SieveTables, divisor_scatter, divisors, small_divisors,
    total,
)

DOUBLE_EXPANSION_MAX_N = 300

POWER_DELTA = "power-delta"
LOG_BETA = "log-beta"
BOUND_KINDS = (POWER_DELTA, LOG_BETA)


@dataclass(frozen=True, eq=False)
class ConvolutionProblem:
    """f', g' with their expansions relative to N and N + h. Build with :meth:`build`."""

    fprime: ArithTable
    gprime: ArithTable
    N: int
    h: int
    f_hat: FiniteExpansion = field(repr=False)
    g_hat: FiniteExpansion = field(repr=False)

    @classmethod
    def build(cls, fprime: ArithTable, gprime: ArithTable, N: int, h: int) -> "ConvolutionProblem":
        if N < 1:
            raise InvalidArgument(f"N must be >= 1, got {N}")
        if h < 0:
            raise InvalidArgument(f"h must be >= 0, got {h}")
        if fprime.n_max < N:
            raise InvalidArgument(f"f' extent {fprime.n_max} below N={N}")
        if gprime.n_max < N + h:
            raise InvalidArgument(f"g' extent {gprime.n_max} below N+h={N + h}")
        if fprime.kind != gprime.kind:
            raise InvalidArgument(f"backend mismatch: f' is {fprime.kind}, g' is {gprime.kind}")
        return cls(fprime, gprime, N, h,
                   expansion_coeffs(fprime, N), expansion_coeffs(gprime, N + h))

    @property
    def kind(self) -> str:
        return self.fprime.kind

    def _check_tables(self, tables: SieveTables) -> None:
        if tables.n_max < self.N + self.h:
            raise InvalidArgument(f"sieve extent {tables.n_max} below N+h={self.N + self.h}")


def brute_force(p: ConvolutionProblem, tables: SieveTables):
    """sum_{n<=N} f(n) g(n+h) with f' cut at N and g' cut at N + h."""
    p._check_tables(tables)
    N, h = p.N, p.h
    f = divisor_scatter(p.fprime.values, N, N, p.kind)
    g = divisor_scatter(p.gprime.values, N + h, N + h, p.kind)
    return total(f[1 : N + 1] * g[1 + h : N + h + 1], p.kind)


def main_term(p: ConvolutionProblem, tables: SieveTables):
    """N * sum_{r<=N} fhat(r) ghat(r) c_r(h)."""
    p._check_tables(tables)
    N = p.N
    row = cr_row(p.h, N, tables)
    terms = p.f_hat.coeffs[1:] * p.g_hat.coeffs[1 : N + 1] * row.values[1:]
    return N * total(terms, p.kind)


def singular_series(p: ConvolutionProblem, tables: SieveTables):
    """sum_{l|h} l * sum_{t<=N/l} mu(t) fhat(l t) ghat(l t).

    For h = 0 every l <= N divides h.
    """
    p._check_tables(tables)
    N, h = p.N, p.h
    if h == 0:
        ls = range(1, N + 1)
    else:
        ls = divisors(h, tables) if h <= tables.n_max else small_divisors(h)
    fc, gc, mob = p.f_hat.coeffs, p.g_hat.coeffs, tables.mobius
    acc = []
    for l in ls:
        if l > N:
            break
        k = N // l
        prod = fc[l : N + 1 : l] * gc[l : k * l + 1 : l] * mob[1 : k + 1]
        acc.append(l * total(prod, p.kind))
    return total(acc, p.kind)


def double_expansion(p: ConvolutionProblem, tables: SieveTables):
    """sum_{r<=N} sum_{s<=N+h} fhat(r) ghat(s) sum_{n<=N} c_r(n) c_s(n+h).

    The inner n-sums form an integer matrix K[r, s]; the result is
    fhat . K . ghat, with no approximation on the exact backend.
    """
    N, h = p.N, p.h
    if N > DOUBLE_EXPANSION_MAX_N:
        raise SizeLimitError(
            f"double_expansion is cubic; N={N} exceeds {DOUBLE_EXPANSION_MAX_N}, use brute_force")
    p._check_tables(tables)
    M = N + h
    # C[m, r] = c_r(m) for m = 1..M, r = 1..M
    C = np.zeros((M + 1, M + 1), dtype=np.int64)
    for m in range(1, M + 1):
        C[m, 1:] = cr_row(m, M, tables).values[1:]
    A = C[1 : N + 1, 1 : N + 1]          # A[n-1, r-1] = c_r(n)
    B = C[1 + h : M + 1, 1 : M + 1]      # B[n-1, s-1] = c_s(n+h)
    K = A.T @ B
    if p.kind == EXACT:
        K = K.astype(object)
    u = p.f_hat.coeffs[1:] @ K
    return total(u * p.g_hat.coeffs[1:], p.kind)


def theorem_bound(kind: str, parameter: float, N: int, h: int) -> float:
    """Error envelope with unit constant: N^(1-δ) ln²N + 1, or N / (ln N)^(β-2)."""
    if N < 2:
        raise InvalidArgument(f"envelope needs N >= 2, got {N}")
    if h < 1:
        raise InvalidArgument(f"theorem envelopes need h >= 1, got {h}")
    if kind == POWER_DELTA:
        if parameter <= 0:
            raise InvalidArgument(f"power-delta needs δ > 0, got {parameter}")
        L = math.log(N)
        return N ** (1.0 - parameter) * L * L + 1.0
    if kind == LOG_BETA:
        if parameter <= 2:
            raise InvalidArgument(f"log-beta needs β > 2, got {parameter}")
        return N / math.log(N) ** (parameter - 2.0)
    raise InvalidArgument(f"unknown bound kind {kind!r} (choose from {', '.join(BOUND_KINDS)})")


@dataclass(frozen=True)
class ConvolutionReport:
    N: int
    h: int
    f_label: str
    g_label: str
    brute_force: object
    main_term: object
    error: object
    bound: Optional[float] = None
    ratio: Optional[float] = None
    bound_kind: Optional[str] = None
    parameter: Optional[float] = None


def report(p: ConvolutionProblem, kind: Optional[str], parameter: Optional[float],
           tables: SieveTables) -> ConvolutionReport:
    """Brute force, main term and error, plus envelope and ratio when ``kind`` is given.

    With ``kind=None`` no theorem is applied and ``bound``/``ratio`` stay ``None``.
    A theorem envelope with ``h = 0`` is rejected.
    """
    if kind is not None:
        # validate the hypothesis before doing any work
        theorem_bound(kind, parameter, max(p.N, 2), max(p.h, 1))
        if p.h == 0:
            raise InvalidArgument("theorem envelopes assume h >= 1; h = 0 is diagnostic only")
    bf = brute_force(p, tables)
    mt = main_term(p, tables)
    err = bf - mt
    bound = ratio = None
    if kind is not None and p.N >= 2:
        bound = theorem_bound(kind, parameter, p.N, p.h)
        ratio = abs(float(err)) / bound
    return ConvolutionReport(p.N, p.h, p.fprime.label, p.gprime.label,
                             bf, mt, err, bound, ratio, kind, parameter)


__all__ = [
    "ConvolutionProblem", "ConvolutionReport", "brute_force", "main_term",
    "singular_series", "double_expansion", "theorem_bound", "report",
    "truncate_support", "POWER_DELTA", "LOG_BETA",
]
