"""Random deletion samplers, robust vertices, orderings and decompositions.

Randomness: each colour ``a`` gets its own generator seeded from
``SeedSequence([seed, a])``, so a sample never depends on the order in which
the palette is walked.  Trial ``t`` of a batch uses the ``t``-th draw of every
colour's stream; a single sample is trial 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import detect
from .detect import UNBOUNDED, RainbowLayers
from .model import ColoredTournament, FlashbowError, Tournament

DEFAULT_CANDIDATE_CAP = 10_000


class PreconditionFlash(FlashbowError, ValueError):
    pass


class PreconditionRainbow(FlashbowError, ValueError):
    pass


class NoRobustPivot(FlashbowError):
    """No prefix of the ordering contains a robust vertex; ``partial`` keeps what was built."""

    def __init__(self, partial: "Decomposition"):
        super().__init__("no prefix of the ordering contains a robust vertex")
        self.partial = partial


def color_rng(seed: int, color: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, color]))


def deletion_probability(l: int) -> float:
    """Root of ``(l-2) p^2 + 2p = 1``."""
    return 1.0 / (1.0 + math.sqrt(l - 1))


def adjusted_flash_values(ct: ColoredTournament, l: int) -> dict[int, np.ndarray]:
    """Per colour, ``l_a(v)``: ``l-1`` when ``a`` enters but never leaves ``v``, else the flash table value."""
    table = detect.flash_table(ct)
    if table.has_cycle() or table.max_finite() >= l:
        raise PreconditionFlash(f"colouring contains an {l}-flash")
    out = {}
    for i, a in enumerate(table.palette):
        vals = np.array(table.lengths[i])
        is_a = ct.colors == a
        in_only = is_a.any(axis=0) & ~is_a.any(axis=1)
        vals[in_only] = l - 1
        out[a] = vals
    return out


@dataclass(frozen=True)
class DeletionSample:
    mode: str  # "deletion" or "window"
    l: int
    m: int | None
    seed: int
    draws: dict  # colour -> l_a (deletion) or sorted window tuple (window)
    survivors: frozenset


@dataclass(frozen=True)
class DeletionTrials:
    mode: str
    l: int
    m: int | None
    seed: int
    survivors: np.ndarray  # (trials, n) bool

    @property
    def sizes(self) -> np.ndarray:
        return self.survivors.sum(axis=1)

    def survivor_set(self, trial: int) -> frozenset:
        return frozenset(int(v) + 1 for v in np.flatnonzero(self.survivors[trial]))


def _deletion_draws(palette, l: int, seed: int, trials: int) -> dict[int, np.ndarray]:
    p = deletion_probability(l)
    if l == 1:
        probs = np.array([1.0])
    else:
        probs = np.full(l, p * p)
        probs[0] = probs[-1] = p
        probs /= probs.sum()
    return {a: color_rng(seed, a).choice(l, size=trials, p=probs) for a in palette}


def deletion_trials(ct: ColoredTournament, l: int, trials: int, seed: int = 0) -> DeletionTrials:
    """Vectorised batch of the incoming/outgoing-colour deletion sampler."""
    if l < 2:
        raise ValueError("need l >= 2")
    values = adjusted_flash_values(ct, l)
    draws = _deletion_draws(values, l, seed, trials)
    prof = detect.color_profiles(ct)
    keep = np.ones((trials, ct.n), dtype=bool)
    for v in range(ct.n):
        for a in prof.incident(v + 1):
            keep[:, v] &= draws[a] == values[a][v]
    return DeletionTrials("deletion", l, None, seed, keep)


def sample_deletion(ct: ColoredTournament, l: int, seed: int) -> DeletionSample:
    batch = deletion_trials(ct, l, 1, seed)
    draws = _deletion_draws(ct.palette(), l, seed, 1)
    return DeletionSample("deletion", l, None, seed, {a: int(d[0]) for a, d in draws.items()},
                          batch.survivor_set(0))


def deletion_expectation_bound(ct: ColoredTournament, l: int) -> float:
    """``p^(2c) |V|`` with ``c`` the largest in- or out-colour count."""
    c = detect.color_profiles(ct).max_in_out()
    return deletion_probability(l) ** (2 * c) * ct.n


def _window_draws(palette, l: int, m: int, seed: int, trials: int) -> dict[int, np.ndarray]:
    # uniform m-subset of {0..l-1} per trial: first m entries of a random permutation
    return {a: np.sort(color_rng(seed, a).random((trials, l)).argsort(axis=1)[:, :m], axis=1)
            for a in palette}


def window_trials(ct: ColoredTournament, l: int, m: int, trials: int, seed: int = 0) -> DeletionTrials:
    """Vectorised batch of the flash-window sampler."""
    if not 1 <= m <= l:
        raise ValueError("need 1 <= m <= l")
    table = detect.flash_table(ct)
    if table.has_cycle() or table.max_finite() >= l:
        raise PreconditionFlash(f"colouring contains an {l}-flash")
    windows = _window_draws(table.palette, l, m, seed, trials)
    through = detect.m_flash_colors(ct, m)
    keep = np.ones((trials, ct.n), dtype=bool)
    for v in range(ct.n):
        for a in through[v]:
            val = table.value(a, v + 1)
            keep[:, v] &= (windows[a] == val).any(axis=1)
    return DeletionTrials("window", l, m, seed, keep)


def sample_flash_window(ct: ColoredTournament, l: int, m: int, seed: int) -> DeletionSample:
    batch = window_trials(ct, l, m, 1, seed)
    windows = _window_draws(ct.palette(), l, m, seed, 1)
    return DeletionSample("window", l, m, seed,
                          {a: tuple(int(x) for x in w[0]) for a, w in windows.items()},
                          batch.survivor_set(0))


# -- robustness --------------------------------------------------------------

def in_robust_radii(ct: ColoredTournament, cap: int,
                    budget: int = detect.DEFAULT_STATE_BUDGET) -> np.ndarray:
    """Per vertex, the largest ``r <= cap`` such that the vertex is ``r``-in-robust.

    Colours are quantified over all positive integers: colours outside the
    palette are avoided by every walk, so they only demand that some ``r``-rainbow
    ends at the vertex at all.
    """
    if cap < 0:
        raise ValueError("cap must be non-negative")
    radius = np.full(ct.n, cap, dtype=np.int64)
    if cap == 0:
        return radius
    pal = ct.palette()
    radius = np.minimum(radius, RainbowLayers(ct, cap, budget=budget).longest_ending_at())
    for a in pal:
        layers = RainbowLayers(ct, cap, [c for c in pal if c != a], budget)
        radius = np.minimum(radius, layers.longest_ending_at())
    return radius


def in_robust_radius(ct: ColoredTournament, v: int, cap: int,
                     budget: int = detect.DEFAULT_STATE_BUDGET) -> int:
    return int(in_robust_radii(ct, cap, budget)[v - 1])


def out_robust_radii(ct: ColoredTournament, cap: int,
                     budget: int = detect.DEFAULT_STATE_BUDGET) -> np.ndarray:
    return in_robust_radii(ct.reversed(), cap, budget)


@dataclass(frozen=True)
class VertexRobustness:
    vertex: int
    in_radius: int
    out_radius: int
    strongly_robust: bool
    witness_colors: tuple[int, ...] | None = None
    # colour a -> (rainbow ending at v with colours C\{a}, rainbow starting at v with colours C\{a})
    witnesses: dict = field(default_factory=dict)
    inconclusive: bool = False


@dataclass(frozen=True)
class RobustnessReport:
    k: int
    cap: int
    vertices: tuple[VertexRobustness, ...]

    def strongly_robust(self) -> list[int]:
        return [r.vertex for r in self.vertices if r.strongly_robust]

    def rows(self) -> list[dict]:
        return [{"vertex": r.vertex, "in_radius": r.in_radius, "out_radius": r.out_radius,
                 "strongly_robust": r.strongly_robust,
                 "witness_colors": list(r.witness_colors) if r.witness_colors else None,
                 "inconclusive": r.inconclusive} for r in self.vertices]


def strongly_robust_vertices(ct: ColoredTournament, k: int, cap: int | None = None,
                             candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                             budget: int = detect.DEFAULT_STATE_BUDGET) -> RobustnessReport:
    """Find vertices with a ``(k-1)``-colour set ``C`` containing all incident colours
    such that for each ``a`` in ``C`` a ``(k-2)``-rainbow with colour set ``C \\ {a}``
    both ends and starts at the vertex."""
    if k < 2:
        raise ValueError("need k >= 2")
    cap = k - 2 if cap is None else cap
    pal = ct.palette()
    prof = detect.color_profiles(ct)
    rev = ct.reversed()
    in_r = in_robust_radii(ct, cap, budget)
    out_r = in_robust_radii(rev, cap, budget)

    ending_cache: dict[frozenset, np.ndarray] = {}
    starting_cache: dict[frozenset, np.ndarray] = {}

    def ends(colors: frozenset) -> np.ndarray:
        if colors not in ending_cache:
            ending_cache[colors] = detect.rainbow_ends_with_colors(ct, sorted(colors), budget)
        return ending_cache[colors]

    def starts(colors: frozenset) -> np.ndarray:
        if colors not in starting_cache:
            starting_cache[colors] = detect.rainbow_ends_with_colors(rev, sorted(colors), budget)
        return starting_cache[colors]

    rows = []
    for v in range(1, ct.n + 1):
        inc = prof.incident(v)
        need = k - 1 - len(inc)
        found = None
        inconclusive = False
        if need >= 0:
            extra = [c for c in pal if c not in inc]
            if math.comb(len(extra), need) > candidate_cap:
                inconclusive = True
            else:
                for add in itertools.combinations(extra, need):
                    C = frozenset(inc) | frozenset(add)
                    if len(C) != k - 1:
                        continue
                    if all(ends(C - {a})[v - 1] and starts(C - {a})[v - 1] for a in C):
                        found = tuple(sorted(C))
                        break
        witnesses = {}
        if found:
            for a in found:
                rest = sorted(set(found) - {a})
                e = RainbowLayers(ct, len(rest), rest, budget).witness(len(rest), v=v, mask=(1 << len(rest)) - 1)
                s = RainbowLayers(rev, len(rest), rest, budget).witness(len(rest), v=v, mask=(1 << len(rest)) - 1)
                start_walk = tuple(reversed(s.walk))
                witnesses[a] = (e.walk, start_walk)
        rows.append(VertexRobustness(v, int(in_r[v - 1]), int(out_r[v - 1]), found is not None,
                                     found, witnesses, inconclusive))
    return RobustnessReport(k, cap, tuple(rows))


def colors_in_two_flashes(ct: ColoredTournament) -> frozenset:
    return frozenset().union(*detect.m_flash_colors(ct, 2))


# -- orderings ---------------------------------------------------------------

def forward_edges(t: Tournament, order) -> int:
    idx = np.asarray(order) - 1
    return int(np.triu(t.adj[np.ix_(idx, idx)], k=1).sum())


def forward_max_ordering(t: Tournament, seed: int = 0, start=None) -> list[int]:
    """Local optimum of the forward-edge count under single-vertex relocation.

    Starts from ``start`` or a ``seed``-determined permutation and applies the
    first improving move found when scanning positions, then targets, in
    increasing order.  At the optimum every vertex beats at least half of the
    vertices after it.
    """
    if start is None:
        order = [int(x) + 1 for x in np.random.default_rng(seed).permutation(t.n)]
    else:
        order = list(start)
        if sorted(order) != list(range(1, t.n + 1)):
            raise ValueError("start must be a permutation of the vertices")
    adj = t.adj
    improved = True
    while improved:
        improved = False
        for i in range(len(order)):
            v = order[i] - 1
            gain, target, best = 0, None, 0
            # moving right past order[i+1..j]
            for j in range(i + 1, len(order)):
                w = order[j] - 1
                gain += int(adj[w, v]) - int(adj[v, w])
                if gain > best:
                    target, best = j, gain
                    break
            if target is None:
                gain = 0
                for j in range(i - 1, -1, -1):
                    w = order[j] - 1
                    gain += int(adj[v, w]) - int(adj[w, v])
                    if gain > best:
                        target, best = j, gain
                        break
            if target is not None:
                order.insert(target, order.pop(i))
                improved = True
                break
    return order


def half_domination_holds(t: Tournament, order) -> bool:
    """Every vertex has out-edges to at least half of the vertices after it."""
    for i, v in enumerate(order):
        after = order[i + 1:]
        outs = sum(t.has_edge(v, w) for w in after)
        if 2 * outs < len(after):
            return False
    return True


# -- decomposition -----------------------------------------------------------

@dataclass
class Decomposition:
    k: int
    r: int
    l: int
    R: frozenset
    ordering: list
    prefix: list | None = None
    pivot: int | None = None
    U: frozenset = frozenset()
    U_by_color: dict = field(default_factory=dict)       # a -> frozenset
    rainbow_to_pivot: dict = field(default_factory=dict)  # a -> walk W_a
    C: dict = field(default_factory=dict)                # a -> frozenset C_a
    classes: dict = field(default_factory=dict)          # a -> {signature: frozenset}
    checks: dict = field(default_factory=dict)

    def class_sizes_total(self) -> int:
        return sum(len(s) for cls in self.classes.values() for s in cls.values())


def decompose(ct: ColoredTournament, k: int, r: int, l: int | None = None, seed: int = 0,
              budget: int = detect.DEFAULT_STATE_BUDGET) -> Decomposition:
    """Materialise the robust-pivot decomposition of a rainbow-free instance.

    ``l`` defaults to one more than the longest flash, the smallest ``l`` for
    which the instance is flash-free.
    """
    if not 1 <= r < k:
        raise ValueError("need 1 <= r < k")
    if detect.longest_rainbow(ct, k, budget).length >= k:
        raise PreconditionRainbow(f"colouring contains a {k}-rainbow")
    flash = detect.longest_flash(ct).length
    if flash is UNBOUNDED:
        raise PreconditionFlash("colouring contains a monochromatic cycle")
    if l is None:
        l = flash + 1
    elif flash >= l:
        raise PreconditionFlash(f"colouring contains an {l}-flash")
    lvals = adjusted_flash_values(ct, max(l, 2))

    ends_k1 = RainbowLayers(ct, k - 1, budget=budget).ends(k - 1)
    R = frozenset(v + 1 for v in range(ct.n) if not ends_k1[v])
    rest = [v for v in range(1, ct.n + 1) if v not in R]
    dec = Decomposition(k, r, l, R, [])
    if not rest:
        raise NoRobustPivot(dec)
    sub = ct.tournament.induced(rest)
    dec.ordering = [rest[i - 1] for i in forward_max_ordering(sub, seed)]

    for size in range(1, len(dec.ordering) + 1):
        P = dec.ordering[:size]
        radii = in_robust_radii(ct.induced(P), r - 1, budget)
        robust = [P[i] for i in range(size) if radii[i] >= r - 1]
        if robust:
            dec.prefix = P
            dec.pivot = min(robust)
            break
    else:
        raise NoRobustPivot(dec)

    v = dec.pivot
    P = dec.prefix
    dec.U = frozenset(ct.tournament.out_neighbors(v))
    sub_p = ct.induced(P)
    pv = P.index(v) + 1
    pal_p = sub_p.palette()
    for a in sorted({ct.color(v, u) for u in dec.U}):
        Ua = frozenset(u for u in dec.U if ct.color(v, u) == a)
        layers = RainbowLayers(sub_p, r - 1, [c for c in pal_p if c != a], budget)
        w = layers.witness(r - 1, v=pv)
        walk = tuple(P[x - 1] for x in w.walk)
        dec.U_by_color[a] = Ua
        dec.rainbow_to_pivot[a] = walk
        Ca = frozenset(w.colors) | {a}
        dec.C[a] = Ca
        order = sorted(Ca)
        groups: dict[tuple, set] = {}
        for u in sorted(Ua):
            sig = tuple(int(lvals[b][u - 1]) if b in lvals else 0 for b in order)
            groups.setdefault(sig, set()).add(u)
        dec.classes[a] = {sig: frozenset(s) for sig, s in sorted(groups.items())}

    dec.checks = _check_decomposition(ct, dec, budget)
    return dec


def _check_decomposition(ct: ColoredTournament, dec: Decomposition, budget: int) -> dict:
    k, r = dec.k, dec.r
    partition = all(set().union(*cls.values()) == dec.U_by_color[a] for a, cls in dec.classes.items())
    no_c_edges = True
    no_rainbow = True
    for a, cls in dec.classes.items():
        Ca = dec.C[a]
        for members in cls.values():
            m = sorted(members)
            for x in m:
                for y in m:
                    if x != y and ct.tournament.has_edge(x, y) and ct.color(x, y) in Ca:
                        no_c_edges = False
            if len(m) > 1 and detect.longest_rainbow(ct.induced(m), k - r, budget).length >= k - r:
                no_rainbow = False
    walks_ok = all(
        len(w) == r and len(set(_colors(ct, w))) == r - 1 and dec.C[a] == frozenset(_colors(ct, w)) | {a}
        and a not in _colors(ct, w) and w[-1] == dec.pivot
        for a, w in dec.rainbow_to_pivot.items())
    half = half_domination_holds(ct.tournament, dec.ordering)
    return {"classes_partition_U": partition and sum(len(s) for s in dec.U_by_color.values()) == len(dec.U),
            "no_C_colored_edge_in_class": no_c_edges,
            "classes_rainbow_free": no_rainbow,
            "rainbow_witnesses_valid": walks_ok,
            "ordering_half_domination": half}


def _colors(ct: ColoredTournament, walk) -> tuple[int, ...]:
    from .model import walk_colors
    return walk_colors(ct, walk)
