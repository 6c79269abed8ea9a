"""Upper and lower bound tables for ``t(l, k)`` (and ``f(l, k)``).

All values are exact integers.  Closed forms involving ``sqrt(l)`` are evaluated
over a rational bracket ``[s_lo, s_hi]`` of the root that is refined until both
ends give the same ceiling, so every reported number is a certified upper bound
on the real expression rounded up.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

SOURCES = ("thm16", "jm", "rec22", "rec23", "hybrid35")
COLUMNS = ("l", "k", "lower", *SOURCES, "best", "best_source")


class DomainError(ValueError):
    pass


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def certified_ceil(expr: Callable[[Fraction], Fraction], l: int) -> int:
    """``ceil(expr(sqrt(l)))`` for ``expr`` monotone on the bracket around the root."""
    root = math.isqrt(l)
    if root * root == l:
        return _ceil(expr(Fraction(root)))
    bits = 32
    while True:
        scale = 1 << bits
        lo = Fraction(math.isqrt(l * scale * scale), scale)
        hi = lo + Fraction(1, scale)
        a, b = _ceil(expr(lo)), _ceil(expr(hi))
        if a == b:
            return a
        bits *= 2


def lower_bound(l: int, k: int) -> int:
    if l < 1 or k < 1:
        raise DomainError("need l, k >= 1")
    return l ** (k - 1)


def thm16_bound(l: int, k: int) -> int:
    """``ceil((1 + 2/sqrt(l))^k * l^(k-1))``."""
    if l < 1 or k < 1:
        raise DomainError("need l, k >= 1")
    return certified_ceil(lambda s: (1 + 2 / s) ** k * l ** (k - 1), l)


def jm_bound(l: int, k: int) -> int:
    """``ceil((1 + 1/sqrt(l))^(k-4) * l^(k-1))``, a bound on ``f`` for ``k >= 4``."""
    if l < 1:
        raise DomainError("need l >= 1")
    if k < 4:
        raise DomainError("the bound needs k >= 4")
    return certified_ceil(lambda s: (1 + 1 / s) ** (k - 4) * l ** (k - 1), l)


def rec22_bound(l: int, k: int, t_prev: int) -> int:
    """``2 t(l,k-1) + ceil((l + 2 sqrt(l))^(k-1))``."""
    if k < 2:
        raise DomainError("need k >= 2")
    return 2 * t_prev + certified_ceil(lambda s: (l + 2 * s) ** (k - 1), l)


def rec23_bound(l: int, k: int, r: int, t: dict[int, int], g: dict[tuple[int, int], int]) -> int:
    """``t(l,k-1) + g(l,k,r-1) + 1 + 2(k-1) l^r t(l,k-r)`` for ``1 <= r < k``."""
    if not 1 <= r < k:
        raise DomainError("need 1 <= r < k")
    return t[k - 1] + g[(k, r - 1)] + 1 + 2 * (k - 1) * l ** r * t[k - r]


def g_step(l: int, k: int, r: int, g_prev: int, t_r: int) -> int:
    """``g(l,k,r-1) + 1 + 2(k-1) r l t(l,r)``."""
    return g_prev + 1 + 2 * (k - 1) * r * l * t_r


def flash_window_bound(t_mk: int, l: int, m: int, c: int) -> int:
    """``ceil(t(m,k) (l/m)^c)``: size bound when each vertex sees at most ``c`` colours of ``m``-flashes."""
    if not 1 <= m <= l:
        raise DomainError("need 1 <= m <= l")
    return _ceil(t_mk * Fraction(l, m) ** c)


def strongly_robust_threshold(l: int, k: int, t: dict[int, int], g: dict[tuple[int, int], int]) -> int:
    """Vertex count from which a rainbow-free, flash-free instance has a strongly robust vertex."""
    if k < 3:
        raise DomainError("need k >= 3")
    return t[k - 1] + g[(k, k - 2)] + 2 * (k - 1) * (t[k - 1] + 2 * (k - 1) * l * t[k - 2]) + 2


def hybrid35_bound(l: int, k: int, t: dict[int, int], g: dict[tuple[int, int], int], t2_k: int) -> int:
    """``max(threshold - 1, ceil(t(2,k) (l/2)^(k-1)))``."""
    if k < 3:
        raise DomainError("need k >= 3")
    if l < 2:
        raise DomainError("need l >= 2")
    return max(strongly_robust_threshold(l, k, t, g) - 1, flash_window_bound(t2_k, l, 2, k - 1))


def r_scan_order(l: int, k: int) -> list[int]:
    """All ``r`` in ``1..k-1``, starting from ``floor(k - (2 log k + log 16)/log l)`` and moving outwards."""
    rs = list(range(1, k))
    if l < 2 or not rs:
        return rs
    guess = math.floor(k - (2 * math.log(k) + math.log(16)) / math.log(l))
    guess = min(max(guess, 1), k - 1)
    return sorted(rs, key=lambda r: (abs(r - guess), r))


@dataclass
class BoundRow:
    l: int
    k: int
    lower: int
    thm16: int | None = None
    jm: int | None = None
    rec22: int | None = None
    rec23: int | None = None
    hybrid35: int | None = None
    best: int = 0
    best_source: str = ""


@dataclass
class BoundTable:
    l: int
    k_max: int
    mode: str  # "t" (all tournaments) or "f" (transitive)
    rows: list[BoundRow] = field(default_factory=list)
    g: dict[tuple[int, int], int] = field(default_factory=dict)  # (k, r) -> g(l,k,r)
    rec23_r: dict[int, int] = field(default_factory=dict)        # k -> minimising r

    def best(self, k: int) -> int:
        return self.rows[k - 1].best

    def row(self, k: int) -> BoundRow:
        return self.rows[k - 1]


def build_table(l: int, k_max: int, f_variant: bool = False, _t2: list[int] | None = None) -> BoundTable:
    """Bound table for ``k = 1..k_max``.

    In ``t`` mode the ``jm`` column is reported but never chosen (it bounds ``f``
    only), and the second hybrid branch uses the best proven bound on ``t(2,k)``.
    With ``f_variant`` the hybrid uses ``f(2,k) = 2^(k-1)`` and ``jm`` is eligible.
    """
    if l < 1 or k_max < 1:
        raise DomainError("need l, k_max >= 1")
    mode = "f" if f_variant else "t"
    if f_variant:
        t2 = [0] + [2 ** (k - 1) for k in range(1, k_max + 1)]
    elif l == 2:
        t2 = None  # the second branch would be t(2,k) itself
    else:
        t2 = _t2 if _t2 is not None else [0] + [r.best for r in build_table(2, k_max).rows]

    table = BoundTable(l, k_max, mode)
    t: dict[int, int] = {}
    for k in range(1, k_max + 1):
        row = BoundRow(l, k, lower_bound(l, k))
        row.thm16 = thm16_bound(l, k)
        if k >= 4:
            row.jm = jm_bound(l, k)
        if k == 1:
            row.best, row.best_source = 1, "base"
            t[1] = 1
            table.rows.append(row)
            continue
        table.g[(k, 0)] = 0
        for r in range(1, k):
            table.g[(k, r)] = g_step(l, k, r, table.g[(k, r - 1)], t[r])
        row.rec22 = rec22_bound(l, k, t[k - 1])
        best_r, best_val = None, None
        for r in r_scan_order(l, k):
            val = rec23_bound(l, k, r, t, table.g)
            if best_val is None or val < best_val:
                best_r, best_val = r, val
        row.rec23 = best_val
        table.rec23_r[k] = best_r
        if k >= 3 and l >= 2 and t2 is not None:
            row.hybrid35 = hybrid35_bound(l, k, t, table.g, t2[k])
        eligible = ["thm16", "rec22", "rec23", "hybrid35"] + (["jm"] if f_variant else [])
        candidates = [(getattr(row, s), SOURCES.index(s), s) for s in eligible if getattr(row, s) is not None]
        val, _, src = min(candidates)
        row.best, row.best_source = val, src
        t[k] = val
        table.rows.append(row)
    return table


def build_tables(ls, k_max: int, f_variant: bool = False) -> dict[int, BoundTable]:
    t2 = None if f_variant else [0] + [r.best for r in build_table(2, k_max).rows]
    return {l: build_table(l, k_max, f_variant, t2) for l in ls}


def emit_table(table: BoundTable | list[BoundTable], fmt: str = "csv") -> str:
    tables = table if isinstance(table, list) else [table]
    rows = [r for tb in tables for r in tb.rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow(["" if getattr(r, c) is None else getattr(r, c) for c in COLUMNS])
        return buf.getvalue()
    if fmt in ("json", "structured"):
        return json.dumps([asdict(r) for r in rows], indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def parse_table(text: str, fmt: str = "csv") -> list[BoundRow]:
    if fmt in ("json", "structured"):
        return [BoundRow(**d) for d in json.loads(text)]
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError("unexpected header")
    out = []
    for d in reader:
        kw = {c: (None if d[c] == "" else int(d[c])) for c in COLUMNS if c != "best_source"}
        out.append(BoundRow(**kw, best_source=d["best_source"]))
    return out
