"""Built-in function families (specified through f') and custom coefficient files.

Family grammar: ``unit``, ``divisor``, ``power:<delta>``, ``log:<beta>``,
``custom:<path>``.

==========  =========================  ===========================
name        f'(d)                      f(n)
==========  =========================  ===========================
unit        1 if d = 1 else 0          1
divisor     1                          d(n)
power:δ     d^(-δ)                     sigma_{-δ}(n)
log:β       1 / (1 + (ln d)^β)         (no closed form)
==========  =========================  ===========================
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .errors import IngestionError, InvalidArgument
from .expansion import FiniteExpansion, dual_invert
from .sieve import EXACT, FLOAT, ArithTable, SieveTables, empty_values, to_kind

FAMILY_NAMES = ("unit", "divisor", "power", "log", "custom")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    param: Optional[float] = None
    path: Optional[str] = None

    @property
    def label(self) -> str:
        if self.name == "custom":
            return f"custom:{self.path}"
        if self.param is None:
            return self.name
        return f"{self.name}:{self.param:g}"


def parse_family(text: str) -> FamilySpec:
    """Parse ``name[:param]``. Raises :class:`InvalidArgument` on bad input."""
    name, _, arg = text.strip().partition(":")
    name = name.lower()
    if name not in FAMILY_NAMES:
        raise InvalidArgument(f"unknown family {name!r} (choose from {', '.join(FAMILY_NAMES)})")
    if name in ("unit", "divisor"):
        if arg:
            raise InvalidArgument(f"family {name!r} takes no parameter")
        return FamilySpec(name)
    if name == "custom":
        if not arg:
            raise InvalidArgument("custom family needs a path: custom:<path>")
        return FamilySpec(name, path=arg)
    try:
        param = float(arg)
    except ValueError:
        raise InvalidArgument(f"family {name!r} needs a numeric parameter, got {arg!r}") from None
    if not math.isfinite(param) or param <= 0:
        raise InvalidArgument(f"family parameter must be positive, got {arg!r}")
    return FamilySpec(name, param)


def build_fprime(spec: FamilySpec, n_max: int, kind: str = FLOAT,
                 tables: SieveTables | None = None) -> ArithTable:
    """Table of f'(d) on ``1..n_max`` for a family.

    On the exact backend, irrational family values are stored as the exact
    rational value of their float64 rounding.
    """
    if n_max < 1:
        raise InvalidArgument(f"n_max must be >= 1, got {n_max}")
    label = spec.label
    if spec.name == "unit":
        vals = empty_values(n_max, kind)
        vals[1] = 1
        return ArithTable(to_kind(vals, kind), kind, label)
    if spec.name == "divisor":
        vals = np.ones(n_max + 1)
        vals[0] = 0
        return ArithTable(to_kind(vals, kind), kind, label)
    if spec.name == "custom":
        cc = load_custom(spec.path, n_max)
        return cc.to_fprime(n_max, kind, tables, label)

    d = np.arange(n_max + 1, dtype=np.float64)
    d[0] = 1.0
    if spec.name == "power":
        if kind == EXACT and float(spec.param).is_integer():
            k = int(spec.param)
            vals = np.empty(n_max + 1, dtype=object)
            vals[:] = [Fraction(0)] + [Fraction(1, m ** k) for m in range(1, n_max + 1)]
            return ArithTable(vals, kind, label)
        vals = d ** (-spec.param)
    else:
        vals = 1.0 / (1.0 + np.log(d) ** spec.param)
    vals[0] = 0.0
    return ArithTable(to_kind(vals, kind), kind, label)


# ---------------------------------------------------------------------------
# Custom coefficient files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CustomCoefficients:
    """Sparse user-supplied f'(d) or fhat(r); unlisted indices are zero."""

    kind: str  # "fprime" | "fhat"
    support: int
    entries: Tuple[Tuple[int, Fraction], ...]

    def dense(self, n: int, value_kind: str) -> np.ndarray:
        vals = empty_values(n, EXACT)
        for i, v in self.entries:
            if i <= n:
                vals[i] = v
        return to_kind(vals, value_kind)

    def to_fprime(self, n_max: int, value_kind: str = FLOAT,
                  tables: SieveTables | None = None, label: str = "custom") -> ArithTable:
        """f' on ``1..n_max``; an ``fhat`` file is dual-inverted at its own support first."""
        if self.kind == "fprime":
            return ArithTable(self.dense(n_max, value_kind), value_kind, label)
        exp = FiniteExpansion(self.support, self.dense(self.support, value_kind), value_kind, label)
        if tables is not None and tables.n_max < self.support:
            tables = None
        fp = dual_invert(exp, tables)
        out = empty_values(n_max, value_kind)
        keep = min(n_max, self.support)
        out[: keep + 1] = fp.values[: keep + 1]
        return ArithTable(out, value_kind, label)


def _parse_value(text: str, line: int) -> Fraction:
    try:
        v = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise IngestionError(f"non-numeric value {text.strip()!r}", line) from None
    return v


def load_custom(path, support: int) -> CustomCoefficients:
    """Read a custom coefficient CSV: a ``fprime`` or ``fhat`` header line, then ``index,value`` rows.

    Values may be integers, decimals or ``p/q`` rationals and are kept exact.
    Blank lines and lines starting with ``#`` are skipped.
    """
    if support < 1:
        raise InvalidArgument(f"support must be >= 1, got {support}")
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot read {p}: {exc.strerror}") from None

    kind = None
    seen = {}
    entries: List[Tuple[int, Fraction]] = []
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if kind is None:
            kind = row[0].strip().lower()
            if kind not in ("fprime", "fhat") or len(row) != 1:
                raise IngestionError("first line must be 'fprime' or 'fhat'", lineno)
            continue
        if len(row) != 2:
            raise IngestionError(f"expected 'index,value', got {len(row)} fields", lineno)
        try:
            idx = int(row[0].strip())
        except ValueError:
            raise IngestionError(f"non-integer index {row[0].strip()!r}", lineno) from None
        if not 1 <= idx <= support:
            raise IngestionError(f"index {idx} outside 1..{support}", lineno)
        if idx in seen:
            raise IngestionError(f"duplicate index {idx} (first on line {seen[idx]})", lineno)
        seen[idx] = lineno
        entries.append((idx, _parse_value(row[1], lineno)))
    if kind is None:
        raise IngestionError("empty file: missing 'fprime'/'fhat' header")
    entries.sort()
    return CustomCoefficients(kind, support, tuple(entries))
