"""
Sieve tables, 1-indexed arithmetic-function tables, Dirichlet convolution
and Moebius inversion.

Two numeric backends share one code path:

- ``exact``: numpy object arrays holding ``fractions.Fraction`` values.
- ``float``: float64 arrays. Slice sums use numpy's pairwise summation and
  final reductions use ``math.fsum``.

Every table stores slot 0 as an unused zero so that ``values[n]`` is the
value at ``n``; public access goes through :meth:`ArithTable.__getitem__`,
which rejects ``n = 0`` and anything past ``n_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence

import numpy as np

from .errors import InvalidArgument, TableRangeError

EXACT = "exact"
FLOAT = "float"
KINDS = (EXACT, FLOAT)


# ---------------------------------------------------------------------------
# Numeric helpers
# ---------------------------------------------------------------------------

def empty_values(n_max: int, kind: str) -> np.ndarray:
    """Zero-filled storage of length ``n_max + 1`` for the given backend."""
    if kind == FLOAT:
        return np.zeros(n_max + 1, dtype=np.float64)
    if kind == EXACT:
        out = np.empty(n_max + 1, dtype=object)
        out[:] = [Fraction(0)] * (n_max + 1)
        return out
    raise InvalidArgument(f"unknown value kind {kind!r}")


def to_kind(values: np.ndarray, kind: str) -> np.ndarray:
    """Convert a raw value array to the storage type of ``kind``."""
    if kind == FLOAT:
        if values.dtype == object:
            return np.array([float(v) for v in values], dtype=np.float64)
        return np.asarray(values, dtype=np.float64)
    out = np.empty(len(values), dtype=object)
    out[:] = [_as_fraction(v) for v in values]
    return out


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    # Exact binary value of the double; no rounding to "nice" rationals.
    return Fraction(float(v))


def total(values, kind: str):
    """Sum a 1-D sequence using the backend's accurate reduction."""
    if kind == FLOAT:
        return math.fsum(values)
    return sum(values, Fraction(0))


def promote(*kinds: str) -> str:
    return EXACT if all(k == EXACT for k in kinds) else FLOAT


# ---------------------------------------------------------------------------
# Arithmetic-function tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ArithTable:
    """Values of an arithmetic function on ``1..n_max``.

    Attributes:
        values: storage of length ``n_max + 1``; slot 0 is padding.
        kind: ``"exact"`` or ``"float"``, uniform over the table.
        label: free-form provenance, e.g. ``"divisor"`` or ``"custom:f.csv"``.
    """

    values: np.ndarray
    kind: str
    label: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgument(f"unknown value kind {self.kind!r}")
        if len(self.values) < 2:
            raise InvalidArgument("a table needs at least one entry (n_max >= 1)")
        self.values.flags.writeable = False

    @classmethod
    def from_values(cls, seq: Iterable, kind: str | None = None, label: str = "") -> "ArithTable":
        """Build a table from values listed for ``n = 1, 2, ...``."""
        raw = list(seq)
        if kind is None:
            kind = FLOAT if any(isinstance(v, (float, np.floating)) for v in raw) else EXACT
        padded = np.empty(len(raw) + 1, dtype=object)
        padded[:] = [0] + raw
        return cls(to_kind(padded, kind), kind, label)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return self.n_max

    def __getitem__(self, n: int):
        if isinstance(n, slice):
            raise TypeError("ArithTable does not support slicing; use .tolist()")
        if not 1 <= n <= self.n_max:
            raise TableRangeError(f"index {n} outside 1..{self.n_max} of table {self.label!r}")
        return self.values[n]

    def tolist(self) -> list:
        """Values for ``n = 1..n_max`` as a plain list."""
        return list(self.values[1:])

    def with_kind(self, kind: str) -> "ArithTable":
        if kind == self.kind:
            return self
        return ArithTable(to_kind(self.values, kind), kind, self.label)

    def equals(self, other: "ArithTable", tol: float = 0.0) -> bool:
        if self.n_max != other.n_max:
            return False
        if self.kind == EXACT and other.kind == EXACT and tol == 0.0:
            return all(a == b for a, b in zip(self.values[1:], other.values[1:]))
        a = np.asarray(to_kind(self.values, FLOAT))
        b = np.asarray(to_kind(other.values, FLOAT))
        return bool(np.max(np.abs(a[1:] - b[1:])) <= tol)


def ones(n_max: int, kind: str = EXACT) -> ArithTable:
    values = empty_values(n_max, kind)
    values[1:] = [Fraction(1)] * n_max if kind == EXACT else 1.0
    return ArithTable(values, kind, "ones")


def delta(n_max: int, kind: str = EXACT) -> ArithTable:
    """The convolution identity: 1 at ``n = 1``, else 0."""
    values = empty_values(n_max, kind)
    values[1] = Fraction(1) if kind == EXACT else 1.0
    return ArithTable(values, kind, "delta1")


# ---------------------------------------------------------------------------
# Sieve
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SieveTables:
    """Moebius, smallest-prime-factor and divisor-count tables up to ``n_max``.

    All arrays have length ``n_max + 1`` and are indexed directly by ``n``;
    slot 0 (and slot 1 of ``spf``) hold 0.
    """

    n_max: int
    mobius: np.ndarray
    spf: np.ndarray
    divisor_count: np.ndarray
    primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.mobius, self.spf, self.divisor_count, self.primes):
            arr.flags.writeable = False

    def check(self, n: int, what: str = "n") -> None:
        if not 1 <= n <= self.n_max:
            raise TableRangeError(f"{what}={n} outside sieve range 1..{self.n_max}")

    def mu(self, n: int) -> int:
        self.check(n)
        return int(self.mobius[n])

    def factorize(self, n: int) -> List[tuple]:
        """Prime factorisation of ``n`` as ``[(p, e), ...]`` ascending in ``p``."""
        self.check(n)
        out = []
        while n > 1:
            p = int(self.spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out

    def totient(self, n: int) -> int:
        phi = n
        for p, _ in self.factorize(n):
            phi = phi // p * (p - 1)
        return phi

    def mobius_table(self, n_max: int | None = None, kind: str = EXACT) -> ArithTable:
        n_max = self.n_max if n_max is None else n_max
        self.check(n_max, "n_max")
        return ArithTable(to_kind(self.mobius[: n_max + 1], kind), kind, "mobius")


def build_sieve(n_max: int) -> SieveTables:
    """Build Moebius, smallest-prime-factor and divisor-count tables on ``1..n_max``."""
    if n_max < 1:
        raise InvalidArgument(f"n_max must be >= 1, got {n_max}")
    n = int(n_max)
    spf = np.zeros(n + 1, dtype=np.int64)
    for i in range(2, math.isqrt(n) + 1):
        if spf[i] == 0:
            seg = spf[i * i :: i]
            seg[seg == 0] = i
    idx = np.arange(n + 1, dtype=np.int64)
    unmarked = spf == 0
    unmarked[:2] = False
    spf[unmarked] = idx[unmarked]
    primes = idx[unmarked]

    mobius = np.ones(n + 1, dtype=np.int64)
    mobius[0] = 0
    for p in primes:
        p = int(p)
        mobius[p::p] *= -1
        if p * p <= n:
            mobius[p * p :: p * p] = 0

    dcount = divisor_scatter(np.ones(n + 1), n, n, FLOAT).astype(np.int64)

    return SieveTables(n, mobius, spf, dcount, primes)


def divisors(n: int, tables: SieveTables) -> List[int]:
    """Ascending list of the divisors of ``n``, from its spf factorisation."""
    divs = [1]
    for p, e in tables.factorize(n):
        pk = 1
        new = []
        for _ in range(e):
            pk *= p
            new.extend(d * pk for d in divs)
        divs.extend(new)
    divs.sort()
    return divs


# ---------------------------------------------------------------------------
# Convolution and inversion
# ---------------------------------------------------------------------------

def multiples_sum(w: np.ndarray, n: int, kind: str, weights: np.ndarray | None = None) -> np.ndarray:
    """``out[r] = sum_{j <= n/r} weights[j] * w[j*r]`` for ``r = 1..n`` (weights default to 1).

    Small ``r`` sum a strided slice; large ``r`` are handled by looping over
    the (few) possible cofactors ``j`` and updating all such ``r`` at once,
    so the number of numpy calls is about ``2 sqrt(n)``.
    """
    out = empty_values(n, kind)
    s = math.isqrt(n)
    for r in range(1, s + 1):
        seg = w[r : n + 1 : r]
        if weights is not None:
            seg = seg * weights[1 : len(seg) + 1]
        out[r] = seg.sum()
    if s < n:
        rs = np.arange(s + 1, n + 1)
        for j in range(1, n // (s + 1) + 1):
            sel = rs[: n // j - s]
            term = w[j * sel]
            if weights is not None:
                term = term * weights[j]
            out[sel] += term
    return out


def divisor_scatter(v: np.ndarray, src_max: int, n_out: int, kind: str) -> np.ndarray:
    """``out[m] = sum_{d | m, d <= src_max} v[d]`` for ``m = 1..n_out``."""
    out = empty_values(n_out, kind)
    top = min(src_max, n_out)
    s = math.isqrt(n_out)
    for d in range(1, min(s, top) + 1):
        if v[d] != 0:
            out[d::d] += v[d]
    if s < top:
        ds = np.arange(s + 1, top + 1)
        for k in range(1, n_out // (s + 1) + 1):
            sel = ds[: min(top, n_out // k) - s]
            if len(sel) == 0:
                break
            out[k * sel] += v[sel]
    return out


def dirichlet_convolve(a: ArithTable, b: ArithTable) -> ArithTable:
    """``(a * b)(n) = sum_{d | n} a(d) b(n/d)`` for every ``n <= n_max``."""
    if a.n_max != b.n_max:
        raise InvalidArgument(f"extent mismatch: {a.n_max} vs {b.n_max}")
    kind = promote(a.kind, b.kind)
    av, bv = to_kind(a.values, kind), to_kind(b.values, kind)
    n = a.n_max
    out = empty_values(n, kind)
    s = math.isqrt(n)
    for d in range(1, s + 1):
        if av[d] != 0:
            out[d::d] += av[d] * bv[1 : n // d + 1]
    if s < n:
        ds = np.arange(s + 1, n + 1)
        for k in range(1, n // (s + 1) + 1):
            sel = ds[: n // k - s]
            out[k * sel] += av[sel] * bv[k]
    return ArithTable(out, kind, f"({a.label})*({b.label})")


def mobius_invert(f: ArithTable, tables: SieveTables) -> ArithTable:
    """``f * mu``: the table ``f'`` with ``f(n) = sum_{d | n} f'(d)``."""
    if f.n_max > tables.n_max:
        raise InvalidArgument(f"table extent {f.n_max} exceeds sieve extent {tables.n_max}")
    mu = tables.mobius_table(f.n_max, f.kind)
    out = dirichlet_convolve(f, mu)
    return ArithTable(out.values, out.kind, f"{f.label}*mu")


def divisor_sum_transform(fprime: ArithTable, upto: int | None = None) -> ArithTable:
    """``f(n) = sum_{d | n, d <= n_max(f')} f'(d)`` for ``n <= upto``.

    ``upto`` may exceed ``fprime.n_max``; divisors beyond the table are
    treated as zero (the truncated-support convention).
    """
    upto = fprime.n_max if upto is None else upto
    out = divisor_scatter(fprime.values, fprime.n_max, upto, fprime.kind)
    return ArithTable(out, fprime.kind, f"sum_d|n {fprime.label}")


def sigma_minus_one(h: int) -> Fraction:
    """``sum_{d | h} 1/d`` as an exact rational."""
    if h < 1:
        raise InvalidArgument(f"h must be >= 1, got {h}")
    s = 0
    for d in range(1, math.isqrt(h) + 1):
        if h % d == 0:
            s += d
            if d * d != h:
                s += h // d
    return Fraction(s, h)


def small_divisors(n: int) -> List[int]:
    """Divisors of ``n`` by trial division, for values outside any sieve."""
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    lo, hi = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            lo.append(d)
            if d * d != n:
                hi.append(n // d)
    return lo + hi[::-1]


__all__: Sequence[str] = [
    "EXACT", "FLOAT", "ArithTable", "SieveTables", "build_sieve", "divisors",
    "dirichlet_convolve", "mobius_invert", "divisor_sum_transform",
    "sigma_minus_one", "small_divisors", "ones", "delta", "total",
]
