"""Exact flash and rainbow detectors.

Flashes are handled per colour: peeling sources of the colour-``a`` subgraph
layer by layer gives the longest ``a``-walk ending at each vertex, and whatever
survives the peeling sits on, or downstream of, a monochromatic cycle.

Rainbows are handled by a layered reachability search over states
``(vertex, set of used colours)``.  Layer ``j`` holds, for every colour mask of
size ``j``, the vertices at which a rainbow walk with exactly those colours
ends.  A walk can only be rainbow while its length is at most the palette size,
so the search always terminates.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import (ColoredTournament, FlashCertificate, FlashbowError,
                    RainbowCertificate)

DEFAULT_STATE_BUDGET = 50_000_000


class StateBudgetExceeded(FlashbowError, RuntimeError):
    """The rainbow search visited more states than its budget allows."""


@functools.total_ordering
class _Unbounded:
    """Marker for flash lengths that are infinite (a monochromatic cycle is involved).

    Compares greater than every integer; deliberately supports no arithmetic.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("Unbounded")

    def __repr__(self):
        return "Unbounded"

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()


def _peel(a_adj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Longest-walk-ending-here levels of a directed graph, plus the unbounded mask."""
    n = a_adj.shape[0]
    level = np.zeros(n, dtype=np.int64)
    indeg = a_adj.sum(axis=0).astype(np.int64)
    alive = np.ones(n, dtype=bool)
    frontier = indeg == 0
    d = 0
    while frontier.any():
        level[frontier] = d
        alive &= ~frontier
        indeg -= a_adj[frontier].sum(axis=0)
        frontier = alive & (indeg == 0)
        d += 1
    return level, alive


@dataclass(frozen=True, eq=False)
class FlashTable:
    """``l_a(v)`` for every palette colour ``a`` and vertex ``v``.

    ``lengths[i, v-1]`` is meaningful only where ``unbounded[i, v-1]`` is false.
    """

    palette: tuple[int, ...]
    lengths: np.ndarray
    unbounded: np.ndarray

    def _row(self, a: int) -> int:
        try:
            return self.palette.index(a)
        except ValueError:
            raise KeyError(f"colour {a} not in palette") from None

    def value(self, a: int, v: int):
        """``l_a(v)``: a non-negative int or ``UNBOUNDED``.  Colours outside the palette give 0."""
        if a not in self.palette:
            return 0
        i = self._row(a)
        if self.unbounded[i, v - 1]:
            return UNBOUNDED
        return int(self.lengths[i, v - 1])

    def row(self, a: int) -> list:
        return [self.value(a, v) for v in range(1, self.lengths.shape[1] + 1)]

    def has_cycle(self) -> bool:
        return bool(self.unbounded.any())

    def max_finite(self) -> int:
        finite = self.lengths[~self.unbounded]
        return int(finite.max()) if finite.size else 0


def flash_table(ct: ColoredTournament) -> FlashTable:
    pal = ct.palette()
    n = ct.n
    lengths = np.zeros((len(pal), n), dtype=np.int64)
    unbounded = np.zeros((len(pal), n), dtype=bool)
    for i, a in enumerate(pal):
        lengths[i], unbounded[i] = _peel(ct.colors == a)
    lengths[unbounded] = 0
    lengths.setflags(write=False)
    unbounded.setflags(write=False)
    return FlashTable(pal, lengths, unbounded)


@dataclass(frozen=True)
class FlashResult:
    length: object  # int or UNBOUNDED
    certificate: FlashCertificate | None

    def __iter__(self):
        return iter((self.length, self.certificate))


def longest_flash(ct: ColoredTournament, table: FlashTable | None = None) -> FlashResult:
    """Longest monochromatic walk; ``UNBOUNDED`` when a monochromatic cycle exists."""
    table = table or flash_table(ct)
    if table.has_cycle():
        return FlashResult(UNBOUNDED, None)
    if not table.palette:
        return FlashResult(0, None)
    best = table.max_finite()
    if best == 0:
        return FlashResult(0, None)
    # first colour in palette order, smallest vertex
    i, v = map(int, np.argwhere(table.lengths == best)[0])
    a = table.palette[i]
    walk = [v]
    a_adj = ct.colors == a
    for d in range(best - 1, -1, -1):
        preds = np.flatnonzero(a_adj[:, walk[-1]] & (table.lengths[i] == d))
        walk.append(int(preds[0]))
    walk.reverse()
    return FlashResult(best, FlashCertificate(tuple(w + 1 for w in walk), a))


# -- rainbow search ----------------------------------------------------------

class RainbowLayers:
    """Layered rainbow reachability restricted to an allowed colour set.

    ``layers[j]`` maps a bitmask over ``colors`` (bit ``i`` = ``colors[i]``) to a
    boolean vector over vertices: where rainbow walks with that colour set end.
    """

    def __init__(self, ct: ColoredTournament, max_len: int,
                 colors: Iterable[int] | None = None,
                 budget: int = DEFAULT_STATE_BUDGET):
        self.ct = ct
        self.colors = tuple(sorted(set(ct.palette() if colors is None else colors)))
        self.max_len = max_len
        n = ct.n
        mats = [(ct.colors == c).astype(np.float32) for c in self.colors]
        present = [bool(m.any()) for m in mats]
        self.layers: list[dict[int, np.ndarray]] = [{0: np.ones(n, dtype=bool)}]
        self.states = n
        if self.states > budget:
            raise StateBudgetExceeded(f"{self.states} states > budget {budget}")
        for _ in range(max_len):
            cur = self.layers[-1]
            masks = list(cur)
            stack = np.stack([cur[m] for m in masks]).astype(np.float32)
            nxt: dict[int, np.ndarray] = {}
            for i, mat in enumerate(mats):
                if not present[i]:
                    continue
                bit = 1 << i
                sel = [j for j, m in enumerate(masks) if not m & bit]
                if not sel:
                    continue
                reach = (stack[sel] @ mat) > 0
                for j, row in zip(sel, reach):
                    if row.any():
                        key = masks[j] | bit
                        if key in nxt:
                            nxt[key] |= row
                        else:
                            nxt[key] = row
            if not nxt:
                break
            self.states += sum(int(r.sum()) for r in nxt.values())
            if self.states > budget:
                raise StateBudgetExceeded(f"{self.states} states > budget {budget}")
            self.layers.append(nxt)

    @property
    def longest(self) -> int:
        return len(self.layers) - 1

    def mask_of(self, colors: Iterable[int]) -> int:
        m = 0
        for c in colors:
            m |= 1 << self.colors.index(c)
        return m

    def colors_of(self, mask: int) -> tuple[int, ...]:
        return tuple(c for i, c in enumerate(self.colors) if mask >> i & 1)

    def ends(self, length: int) -> np.ndarray:
        """Vertices (0-based mask) at which some rainbow walk of ``length`` ends."""
        if length >= len(self.layers):
            return np.zeros(self.ct.n, dtype=bool)
        return np.logical_or.reduce(list(self.layers[length].values()))

    def longest_ending_at(self) -> np.ndarray:
        out = np.zeros(self.ct.n, dtype=np.int64)
        for j in range(1, len(self.layers)):
            out[self.ends(j)] = j
        return out

    def witness(self, length: int, v: int | None = None, mask: int | None = None) -> RainbowCertificate | None:
        """Reconstruct a rainbow walk of ``length`` (optionally ending at ``v``, with colour set ``mask``)."""
        if length >= len(self.layers):
            return None
        layer = self.layers[length]
        end = None
        for m in sorted(layer):
            if mask is not None and m != mask:
                continue
            row = layer[m]
            if v is not None:
                if row[v - 1]:
                    end = (m, v - 1)
                    break
            elif row.any():
                end = (m, int(np.flatnonzero(row)[0]))
                break
        if end is None:
            return None
        m, w = end
        walk = [w]
        cols = []
        for j in range(length, 0, -1):
            for i, c in enumerate(self.colors):
                bit = 1 << i
                if not m & bit:
                    continue
                prev = self.layers[j - 1].get(m ^ bit)
                if prev is None:
                    continue
                cand = np.flatnonzero(prev & (self.ct.colors[:, walk[-1]] == c))
                if cand.size:
                    walk.append(int(cand[0]))
                    cols.append(c)
                    m ^= bit
                    break
            else:  # pragma: no cover - layers are built from predecessors
                raise AssertionError("broken rainbow layer chain")
        walk.reverse()
        cols.reverse()
        return RainbowCertificate(tuple(x + 1 for x in walk), tuple(cols))


@dataclass(frozen=True)
class RainbowResult:
    length: int
    certificate: RainbowCertificate

    def __iter__(self):
        return iter((self.length, self.certificate))


def longest_rainbow(ct: ColoredTournament, cap: int,
                    budget: int = DEFAULT_STATE_BUDGET) -> RainbowResult:
    """Exact longest rainbow walk, truncated at ``cap``."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    layers = RainbowLayers(ct, cap, budget=budget)
    return RainbowResult(layers.longest, layers.witness(layers.longest))


def is_flash_rainbow_free(ct: ColoredTournament, l: int, k: int,
                          budget: int = DEFAULT_STATE_BUDGET) -> bool:
    """True iff ``ct`` has no ``l``-flash and no ``k``-rainbow."""
    return longest_flash(ct).length < l and longest_rainbow(ct, k, budget).length < k


# -- colour profiles ---------------------------------------------------------

@dataclass(frozen=True)
class ColorProfile:
    in_colors: tuple[frozenset, ...]
    out_colors: tuple[frozenset, ...]

    def incoming(self, v: int) -> frozenset:
        return self.in_colors[v - 1]

    def outgoing(self, v: int) -> frozenset:
        return self.out_colors[v - 1]

    def incident(self, v: int) -> frozenset:
        return self.in_colors[v - 1] | self.out_colors[v - 1]

    def max_in_out(self) -> int:
        """Largest number of incoming or outgoing colours at any vertex."""
        return max(max(len(s) for s in self.in_colors), max(len(s) for s in self.out_colors))


def color_profiles(ct: ColoredTournament) -> ColorProfile:
    cols = ct.colors
    ins = tuple(frozenset(int(c) for c in cols[:, v] if c) for v in range(ct.n))
    outs = tuple(frozenset(int(c) for c in cols[v] if c) for v in range(ct.n))
    return ColorProfile(ins, outs)


def m_flash_colors(ct: ColoredTournament, m: int) -> tuple[frozenset, ...]:
    """Per vertex, the colours of ``m``-flashes passing through it."""
    if m < 1:
        raise ValueError("m must be positive")
    ending = flash_table(ct)
    starting = flash_table(ct.reversed())
    out = []
    for v in range(1, ct.n + 1):
        s = set()
        for a in ending.palette:
            e, b = ending.value(a, v), starting.value(a, v)
            if e is UNBOUNDED or b is UNBOUNDED or e + b >= m:
                s.add(a)
        out.append(frozenset(s))
    return tuple(out)


def rainbow_ends_with_colors(ct: ColoredTournament, colors: Sequence[int],
                             budget: int = DEFAULT_STATE_BUDGET) -> np.ndarray:
    """Vertices at which a rainbow walk using exactly the colour set ``colors`` ends."""
    layers = RainbowLayers(ct, len(colors), colors, budget)
    row = layers.layers[-1].get(layers.mask_of(colors)) if layers.longest == len(colors) else None
    return np.zeros(ct.n, dtype=bool) if row is None else row.copy()
