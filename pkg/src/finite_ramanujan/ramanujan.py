"""Ramanujan sums c_r(n): Moebius-divisor formula, cosine oracle, and rows c_r(h)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument, NumericOracleFailure, TableRangeError
from .sieve import SieveTables, divisors, small_divisors

ORACLE_TOL = 1e-6
ORACLE_MAX_R = 10**6


def ramanujan_sum(r: int, n: int, tables: SieveTables) -> int:
    """c_r(n) = sum over d | gcd(r, n) of mu(r/d) * d, with gcd(r, 0) = r."""
    if r < 1:
        raise InvalidArgument(f"r must be >= 1, got {r}")
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    tables.check(r, "r")
    g = math.gcd(r, n)
    mob = tables.mobius
    return sum(int(mob[r // d]) * d for d in divisors(g, tables))


def ramanujan_sum_direct(r: int, n: int) -> int:
    """Oracle: sum of cos(2 pi a n / r) over 1 <= a <= r with gcd(a, r) = 1.

    The sine sum must vanish and the cosine sum must be within ``ORACLE_TOL``
    of an integer; otherwise :class:`NumericOracleFailure` is raised.
    """
    if r < 1:
        raise InvalidArgument(f"r must be >= 1, got {r}")
    if r > ORACLE_MAX_R:
        raise InvalidArgument(f"oracle is O(r); r={r} exceeds guard {ORACLE_MAX_R}")
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    a = np.arange(1, r + 1, dtype=np.int64)
    a = a[np.gcd(a, r) == 1]
    # reduce a*n mod r before scaling so the angle stays in [0, 2 pi)
    theta = (2.0 * math.pi / r) * ((a * (n % r)) % r)
    re = math.fsum(np.cos(theta))
    im = math.fsum(np.sin(theta))
    nearest = round(re)
    if abs(im) > ORACLE_TOL or abs(re - nearest) > ORACLE_TOL:
        raise NumericOracleFailure(
            f"c_{r}({n}) oracle off-integer: re={re!r}, im={im!r}")
    return int(nearest)


def lemma1_indicator(d: int, n: int, tables: SieveTables) -> Fraction:
    """(1/d) * sum_{r | d} c_r(n); equals 1 when d | n and 0 otherwise."""
    if d < 1:
        raise InvalidArgument(f"d must be >= 1, got {d}")
    tables.check(d, "d")
    s = sum(ramanujan_sum(r, n, tables) for r in divisors(d, tables))
    return Fraction(s, d)


@dataclass(frozen=True, eq=False)
class RamanujanRow:
    """c_r(h) for r = 1..r_max at a fixed shift h. ``values[r]`` is c_r(h); slot 0 is 0."""

    h: int
    r_max: int
    values: np.ndarray

    def __post_init__(self):
        self.values.flags.writeable = False

    def __getitem__(self, r: int) -> int:
        if not 1 <= r <= self.r_max:
            raise TableRangeError(f"r={r} outside 1..{self.r_max}")
        return int(self.values[r])

    def tolist(self) -> list:
        return [int(v) for v in self.values[1:]]


def cr_row(h: int, r_max: int, tables: SieveTables) -> RamanujanRow:
    """Row of c_r(h), r <= r_max, built as sum over l | h of l * mu(r/l) on multiples of l.

    For h = 0 every l divides h, so the same loop yields phi(r).
    """
    if h < 0:
        raise InvalidArgument(f"h must be >= 0, got {h}")
    if r_max < 1:
        raise InvalidArgument(f"r_max must be >= 1, got {r_max}")
    tables.check(r_max, "r_max")
    mob = tables.mobius
    vals = np.zeros(r_max + 1, dtype=np.int64)
    ls = range(1, r_max + 1) if h == 0 else (l for l in _divisors_of_shift(h, tables) if l <= r_max)
    for l in ls:
        vals[l::l] += l * mob[1 : r_max // l + 1]
    return RamanujanRow(h, r_max, vals)


def _divisors_of_shift(h: int, tables: SieveTables):
    if h <= tables.n_max:
        return divisors(h, tables)
    return small_divisors(h)
