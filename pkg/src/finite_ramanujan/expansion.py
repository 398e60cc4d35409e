"""Finite Ramanujan expansions relative to a support bound.

An arithmetic function is handled through its Moebius transform ``f'``
(so ``f(n) = sum_{d | n} f'(d)``). Truncating ``f'`` at a support ``N`` gives
coefficients ``fhat(r) = sum_{r | d <= N} f'(d)/d`` with

    f(n) = sum_{r <= N} fhat(r) c_r(n)        for every n <= N,

exactly. :func:`dual_invert` recovers ``f'`` from ``fhat``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import InvalidArgument, TableRangeError
from .ramanujan import cr_row
from .sieve import (
    EXACT, FLOAT, ArithTable, SieveTables, build_sieve, empty_values,
    multiples_sum, to_kind, total,
)


@dataclass(frozen=True, eq=False)
class FiniteExpansion:
    """Coefficients ``fhat(r)`` for ``r = 1..support``; zero beyond by definition.

    ``coeffs`` has length ``support + 1`` with slot 0 unused.
    """

    support: int
    coeffs: np.ndarray
    kind: str
    source_label: str = ""

    def __post_init__(self):
        if self.support < 1:
            raise InvalidArgument(f"support must be >= 1, got {self.support}")
        if len(self.coeffs) != self.support + 1:
            raise InvalidArgument("coeffs length must be support + 1")
        self.coeffs.flags.writeable = False

    @classmethod
    def from_coeffs(cls, seq: Iterable, kind: str | None = None, label: str = "") -> "FiniteExpansion":
        """Build from ``fhat(1), fhat(2), ...``; the support is the sequence length."""
        t = ArithTable.from_values(seq, kind, label)
        return cls(t.n_max, np.array(t.values), t.kind, label)

    def __getitem__(self, r: int):
        if not 1 <= r <= self.support:
            raise TableRangeError(f"r={r} outside support 1..{self.support}")
        return self.coeffs[r]

    def get(self, r: int):
        """``fhat(r)``, returning zero for ``r > support``."""
        if r < 1:
            raise TableRangeError(f"r={r} must be >= 1")
        if r > self.support:
            return Fraction(0) if self.kind == EXACT else 0.0
        return self.coeffs[r]

    def tolist(self) -> list:
        return list(self.coeffs[1:])

    def with_kind(self, kind: str) -> "FiniteExpansion":
        if kind == self.kind:
            return self
        return FiniteExpansion(self.support, to_kind(self.coeffs, kind), kind, self.source_label)


def truncate_support(fprime: ArithTable, bound: int) -> ArithTable:
    """Keep ``f'(d)`` for ``d <= bound`` only; a bound past the table pads with zeros."""
    if bound < 1:
        raise InvalidArgument(f"bound must be >= 1, got {bound}")
    if bound == fprime.n_max:
        return fprime
    out = empty_values(bound, fprime.kind)
    keep = min(bound, fprime.n_max)
    out[: keep + 1] = fprime.values[: keep + 1]
    return ArithTable(out, fprime.kind, fprime.label)


def expansion_coeffs(fprime: ArithTable, support: int) -> FiniteExpansion:
    """Finite Ramanujan coefficients of ``f`` relative to ``support``."""
    if support < 1:
        raise InvalidArgument(f"support must be >= 1, got {support}")
    if fprime.n_max < support:
        raise InvalidArgument(f"table extent {fprime.n_max} below support {support}")
    d = np.arange(support + 1, dtype=np.int64)
    d[0] = 1
    w = fprime.values[: support + 1] / d
    coeffs = multiples_sum(w, support, fprime.kind)
    return FiniteExpansion(support, coeffs, fprime.kind, fprime.label)


def dual_invert(exp: FiniteExpansion, tables: SieveTables | None = None) -> ArithTable:
    """Recover ``f'(r) = r * sum_{t <= support/r} mu(t) fhat(r t)`` on ``1..support``."""
    if tables is None:
        tables = build_sieve(exp.support)
    tables.check(exp.support, "support")
    inner = multiples_sum(exp.coeffs, exp.support, exp.kind, weights=tables.mobius)
    inner = inner * np.arange(exp.support + 1, dtype=np.int64)
    return ArithTable(inner, exp.kind, exp.source_label)


def evaluate(exp: FiniteExpansion, n: int, tables: SieveTables):
    """``sum_{r <= support} fhat(r) c_r(n)``."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    row = cr_row(n, exp.support, tables)
    return total(exp.coeffs[1:] * row.values[1:], exp.kind)


__all__ = [
    "FiniteExpansion", "truncate_support", "expansion_coeffs", "dual_invert",
    "evaluate", "EXACT", "FLOAT",
]
