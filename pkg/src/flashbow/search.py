"""Exhaustive search for colourings without ``l``-flashes and ``k``-rainbows.

Colourings are enumerated up to renaming of colours as restricted-growth
strings over the edges in pair order: the colour of edge ``i`` is at most one
more than the largest colour used on edges ``0..i-1``.  A prefix that already
contains an ``l``-flash or a ``k``-rainbow is cut, since adding edges never
destroys a walk.  Whenever an edge is added, the check only looks at walks
through the new edge, because the prefix without it was clean.

The prefix tree is split at a fixed depth into independent subtree tasks.
Tasks are merged strictly in order, so serial and parallel runs agree.
"""

from __future__ import annotations

import functools
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import detect
from .construct import grid_coloring, reversed_edge_tournament
from .model import ColoredTournament, FlashbowError, Tournament, new_transitive, to_dict

DEFAULT_NODE_BUDGET = 10 ** 9
DEFAULT_SPLIT_DEPTH = 4
DEFAULT_TOURNAMENT_CAP = 7
CHECKPOINT_VERSION = 1

FORCED = "forced"
COUNTEREXAMPLE = "counterexample"
BUDGET_EXCEEDED = "budget_exceeded"


class TournamentCapExceeded(FlashbowError, ValueError):
    pass


class CheckpointMismatch(FlashbowError, ValueError):
    pass


def default_budget() -> int:
    env = os.environ.get("FLASHBOW_BUDGET")
    return int(env) if env else DEFAULT_NODE_BUDGET


@functools.lru_cache(maxsize=None)
def rg_completions(remaining: int, current_max: int) -> int:
    """Restricted-growth completions of ``remaining`` more symbols after a prefix with maximum ``current_max``."""
    if remaining == 0:
        return 1
    return current_max * rg_completions(remaining - 1, current_max) + rg_completions(remaining - 1, current_max + 1)


@dataclass
class SearchStats:
    nodes: int = 0      # colour assignments tried
    pruned: int = 0     # assignments rejected
    leaves: int = 0     # complete colourings reached
    covered: int = 0    # canonical colourings accounted for (leaves + pruned subtrees)
    tasks: int = 0

    def add(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.pruned += other.pruned
        self.leaves += other.leaves
        self.covered += other.covered
        self.tasks += other.tasks


class _Budget(Exception):
    pass


class _Found(Exception):
    pass


class _Engine:
    """Incremental partial colouring with exact flash/rainbow checks on each new edge."""

    def __init__(self, n, edges, l, k, mode):
        # mode: "prune" (incremental checks), "leafcheck" (check complete colourings only), "count"
        self.n, self.edges, self.l, self.k, self.mode = n, edges, l, k, mode
        self.e = len(edges)
        self.out = [[] for _ in range(n)]
        self.inn = [[] for _ in range(n)]
        self.colors: list[int] = []
        self.stats = SearchStats()
        self.found: list[int] | None = None
        self.cap = None

    def push(self, c):
        u, v = self.edges[len(self.colors)]
        self.out[u].append((v, c))
        self.inn[v].append((u, c))
        self.colors.append(c)

    def pop(self):
        u, v = self.edges[len(self.colors) - 1]
        self.out[u].pop()
        self.inn[v].pop()
        self.colors.pop()

    # -- checks on the most recently pushed edge --
    def _flash_through(self, u, v, a) -> bool:
        """True if some ``a``-walk through ``u -> v`` has length >= l (or is unbounded)."""
        stack, seen = [v], {v}
        while stack:
            x = stack.pop()
            for y, c in self.out[x]:
                if c == a and y not in seen:
                    if y == u:
                        return True
                    seen.add(y)
                    stack.append(y)
        # acyclic in colour a now; the new edge is used at most once
        end = self._longest(u, a, self.inn, skip=(u, v))
        start = self._longest(v, a, self.out, skip=(v, u))
        return end + 1 + start >= self.l

    def _longest(self, x, a, adj, skip):
        memo = {}

        def go(y):
            if y in memo:
                return memo[y]
            best = 0
            for z, c in adj[y]:
                if c == a and (y, z) != skip:
                    best = max(best, go(z) + 1)
            memo[y] = best
            return best

        return go(x)

    def _masks(self, start, adj, a, maxlen):
        frontier = [(start, 0)]
        seen = set(frontier)
        masks = {0}
        for _ in range(maxlen):
            nxt = []
            for w, m in frontier:
                for x, c in adj[w]:
                    if c == a:
                        continue
                    b = 1 << c
                    if m & b:
                        continue
                    s = (x, m | b)
                    if s not in seen:
                        seen.add(s)
                        nxt.append(s)
                        masks.add(m | b)
            if not nxt:
                break
            frontier = nxt
        return masks

    def _rainbow_through(self, u, v, a) -> bool:
        need = self.k - 1
        if need == 0:
            return True
        ending = self._masks(u, self.inn, a, need)
        starting = self._masks(v, self.out, a, need)
        by_size: dict[int, list[int]] = {}
        for m in starting:
            by_size.setdefault(bin(m).count("1"), []).append(m)
        for m1 in ending:
            for m2 in by_size.get(need - bin(m1).count("1"), ()):
                if not m1 & m2:
                    return True
        return False

    def bad_last(self) -> bool:
        u, v = self.edges[len(self.colors) - 1]
        a = self.colors[-1]
        if self.l <= 1 or self.k <= 1:
            return True
        return self._flash_through(u, v, a) or self._rainbow_through(u, v, a)

    def complete_is_good(self) -> bool:
        ct = self.as_colored()
        return detect.is_flash_rainbow_free(ct, self.l, self.k)

    def as_colored(self) -> ColoredTournament:
        return ColoredTournament.from_edges(
            self.n, [(u + 1, v + 1, c) for (u, v), c in zip(self.edges, self.colors)])

    # -- enumeration --
    def _tick(self):
        self.stats.nodes += 1
        if self.cap is not None and self.stats.nodes > self.cap:
            raise _Budget

    def walk(self, depth_limit, on_prefix=None):
        """DFS from the current prefix down to ``depth_limit`` edges."""
        cur_max = max(self.colors, default=0)
        i = len(self.colors)
        if i == depth_limit:
            if i == self.e:
                self._leaf()
            else:
                on_prefix(tuple(self.colors))
            return
        for c in range(1, cur_max + 2):
            self._tick()
            self.push(c)
            if self.mode == "prune" and self.bad_last():
                self.stats.pruned += 1
                self.stats.covered += rg_completions(self.e - i - 1, max(cur_max, c))
            else:
                self.walk(depth_limit, on_prefix)
            self.pop()

    def _leaf(self):
        self.stats.leaves += 1
        self.stats.covered += 1
        if self.mode == "count":
            return
        if self.mode == "leafcheck" and not self.complete_is_good():
            return
        self.found = list(self.colors)
        raise _Found


@dataclass
class _TaskResult:
    index: int
    stats: SearchStats
    counterexample: list[int] | None
    budget_hit: bool


def _run_task(args) -> _TaskResult:
    n, edges, l, k, mode, prefix, index, cap = args
    eng = _Engine(n, edges, l, k, mode)
    eng.cap = cap
    for c in prefix:
        eng.push(c)
    budget_hit = False
    try:
        eng.walk(eng.e)
    except _Found:
        pass
    except _Budget:
        budget_hit = True
    eng.stats.tasks = 1
    return _TaskResult(index, eng.stats, eng.found, budget_hit)


@dataclass
class ForcingResult:
    status: str
    l: int
    k: int
    coloring: ColoredTournament | None
    stats: SearchStats

    @property
    def forced(self) -> bool:
        return self.status == FORCED

    def to_dict(self) -> dict:
        return {"status": self.status, "l": self.l, "k": self.k,
                "coloring": to_dict(self.coloring) if self.coloring else None,
                "stats": asdict(self.stats)}


def _oriented_edges(t: Tournament) -> list[tuple[int, int]]:
    return [(u - 1, v - 1) for u, v in t.edges()]


def _search(n, edges, l, k, mode, budget, threads, split_depth, checkpoint):
    e = len(edges)
    total = SearchStats()
    if e == 0:
        total.leaves = total.covered = 1
        good = mode == "count" or (l >= 1 and k >= 1)
        if mode == "count":
            return None, total, False
        return ([] if good else None), total, False

    depth = min(split_depth, e - 1)
    head = _Engine(n, edges, l, k, mode)
    head.cap = budget
    prefixes: list[tuple[int, ...]] = []
    try:
        head.walk(depth, prefixes.append)
    except _Budget:
        total.add(head.stats)
        return None, total, True
    total.add(head.stats)

    done: dict[int, _TaskResult] = {}
    header = {"version": CHECKPOINT_VERSION, "n": n, "edges": edges, "l": l, "k": k,
              "mode": mode, "split_depth": depth, "tasks": len(prefixes)}
    if checkpoint is not None:
        done = _load_checkpoint(Path(checkpoint), header)

    def save():
        if checkpoint is not None:
            _save_checkpoint(Path(checkpoint), header, done)

    args = lambda i, cap: (n, edges, l, k, mode, prefixes[i], i, cap)  # noqa: E731
    todo = [i for i in range(len(prefixes)) if i not in done]

    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for res in pool.map(_run_task, [args(i, budget) for i in todo]):
                done[res.index] = res
                save()
        results = [done[i] for i in range(len(prefixes))]
        return _merge(results, total, budget)

    acc = total.nodes
    results = []
    for i in range(len(prefixes)):
        if i not in done:
            done[i] = _run_task(args(i, max(budget - acc, 0)))
            save()
        res = done[i]
        results.append(res)
        acc += res.stats.nodes
        if acc > budget or res.budget_hit or (res.counterexample is not None and mode != "count"):
            break
    return _merge(results, total, budget)


def _merge(results, total, budget):
    for res in results:
        total.add(res.stats)
        if total.nodes > budget or res.budget_hit:
            return None, total, True
        if res.counterexample is not None:
            return res.counterexample, total, False
    return None, total, False


def _save_checkpoint(path: Path, header: dict, done: dict) -> None:
    data = dict(header)
    data["completed"] = [{"index": r.index, "stats": asdict(r.stats), "counterexample": r.counterexample,
                          "budget_hit": r.budget_hit} for _, r in sorted(done.items())]
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(data))
    tmp.replace(path)


def _load_checkpoint(path: Path, header: dict) -> dict:
    if not path.exists():
        return {}
    data = json.loads(path.read_text())
    for key, val in header.items():
        got = data.get(key)
        if key == "edges":
            got = [tuple(x) for x in got]
            val = [tuple(x) for x in val]
        if got != val:
            raise CheckpointMismatch(f"checkpoint field {key!r} does not match this search")
    return {d["index"]: _TaskResult(d["index"], SearchStats(**d["stats"]), d["counterexample"], d["budget_hit"])
            for d in data["completed"] if not d["budget_hit"]}


def forcing_check(t: Tournament, l: int, k: int, budget: int | None = None, threads: int = 1,
                  prune: bool = True, split_depth: int = DEFAULT_SPLIT_DEPTH,
                  checkpoint=None) -> ForcingResult:
    """Does every colouring of ``t`` contain an ``l``-flash or a ``k``-rainbow?

    Returns the lexicographically least clean colouring (as a restricted-growth
    string) when one exists.
    """
    if l < 1 or k < 1:
        raise ValueError("need l, k >= 1")
    budget = default_budget() if budget is None else budget
    edges = _oriented_edges(t)
    mode = "prune" if prune else "leafcheck"
    found, stats, over = _search(t.n, edges, l, k, mode, budget, threads, split_depth, checkpoint)
    if over:
        return ForcingResult(BUDGET_EXCEEDED, l, k, None, stats)
    if found is not None:
        ct = ColoredTournament.from_edges(t.n, [(u + 1, v + 1, c) for (u, v), c in zip(edges, found)])
        return ForcingResult(COUNTEREXAMPLE, l, k, ct, stats)
    return ForcingResult(FORCED, l, k, None, stats)


def count_canonical_colorings(edge_count: int, threads: int = 1,
                              split_depth: int = DEFAULT_SPLIT_DEPTH) -> SearchStats:
    """Enumerate every restricted-growth colouring of ``edge_count`` edges without pruning."""
    edges = [(0, 0)] * edge_count  # endpoints are never read in count mode
    _, stats, _ = _search(1, edges, 1, 1, "count", 10 ** 18, threads, split_depth, None)
    return stats


def iter_canonical_colorings(edge_count: int):
    """Restricted-growth strings of length ``edge_count``, in lexicographic order."""
    def rec(prefix, cur):
        if len(prefix) == edge_count:
            yield tuple(prefix)
            return
        for c in range(1, cur + 2):
            prefix.append(c)
            yield from rec(prefix, max(cur, c))
            prefix.pop()
    yield from rec([], 0)


# -- tournament enumeration ---------------------------------------------------

@functools.lru_cache(maxsize=None)
def _perms(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def canonical_code(adj: np.ndarray) -> tuple[int, np.ndarray]:
    """Minimum over vertex permutations of the pair-order bit string (bit set = backward edge)."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n == 1:
        return 0, adj.copy()
    P = _perms(n)
    B = adj[P[:, :, None], P[:, None, :]]
    I, J = np.triu_indices(n, k=1)
    bits = B[:, J, I].astype(np.int64)
    weights = 1 << np.arange(len(I) - 1, -1, -1, dtype=np.int64)
    codes = bits @ weights
    best = int(codes.argmin())
    return int(codes[best]), B[best]


def canonical_form(t: Tournament) -> Tournament:
    return Tournament(canonical_code(t.adj)[1])


def code_to_tournament(n: int, code: int) -> Tournament:
    adj = np.zeros((n, n), dtype=bool)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for idx, (i, j) in enumerate(pairs):
        if code >> (len(pairs) - 1 - idx) & 1:
            adj[j, i] = True
        else:
            adj[i, j] = True
    return Tournament(adj)


@functools.lru_cache(maxsize=None)
def _canonical_codes(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    codes = set()
    for prev in _canonical_codes(n - 1):
        base = code_to_tournament(n - 1, prev).adj
        for pattern in range(1 << (n - 1)):
            adj = np.zeros((n, n), dtype=bool)
            adj[:n - 1, :n - 1] = base
            for u in range(n - 1):
                if pattern >> u & 1:
                    adj[u, n - 1] = True
                else:
                    adj[n - 1, u] = True
            codes.add(canonical_code(adj)[0])
    return tuple(sorted(codes))


def enumerate_tournaments(n: int, cap: int = DEFAULT_TOURNAMENT_CAP) -> list[Tournament]:
    """One canonical representative per isomorphism class, sorted by canonical code."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise TournamentCapExceeded(f"n={n} exceeds cap {cap}")
    return [code_to_tournament(n, c) for c in _canonical_codes(n)]


# -- exact values ------------------------------------------------------------

@dataclass
class SizeRecord:
    n: int
    status: str  # "good", "forced", "budget"
    stats: SearchStats
    tournaments: int = 1


@dataclass
class SearchOutcome:
    l: int
    k: int
    mode: str  # "f" or "t"
    value: int | None
    exact: bool
    witness: ColoredTournament | None
    forcing_stats: SearchStats | None
    budget_exceeded: bool
    history: list[SizeRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"l": self.l, "k": self.k, "mode": self.mode, "value": self.value, "exact": self.exact,
                "witness": to_dict(self.witness) if self.witness else None,
                "forcing_stats": asdict(self.forcing_stats) if self.forcing_stats else None,
                "budget_exceeded": self.budget_exceeded,
                "history": [{"n": h.n, "status": h.status, "tournaments": h.tournaments,
                             "stats": asdict(h.stats)} for h in self.history]}


def _lower_witness(l: int, k: int) -> ColoredTournament:
    if k >= 2:
        return grid_coloring(l, k)
    return ColoredTournament.monochromatic(new_transitive(1))


def compute_f(l: int, k: int, n_cap: int | None = None, budget: int | None = None,
              threads: int = 1) -> SearchOutcome:
    """Exact ``f(l, k)``: largest ``n`` whose transitive tournament has a clean colouring."""
    if l < 1 or k < 1:
        raise ValueError("need l, k >= 1")
    witness = _lower_witness(l, k)
    value = witness.n
    n_cap = value + 1 if n_cap is None else n_cap
    out = SearchOutcome(l, k, "f", value, False, witness, None, False)
    for n in range(value + 1, n_cap + 1):
        res = forcing_check(new_transitive(n), l, k, budget, threads)
        if res.status == BUDGET_EXCEEDED:
            out.history.append(SizeRecord(n, "budget", res.stats))
            out.budget_exceeded = True
            return out
        if res.status == COUNTEREXAMPLE:
            out.history.append(SizeRecord(n, "good", res.stats))
            out.value, out.witness = n, res.coloring
            continue
        out.history.append(SizeRecord(n, "forced", res.stats))
        out.exact = True
        out.forcing_stats = res.stats
        return out
    return out


def compute_t(l: int, k: int, n_cap: int | None = None, budget: int | None = None,
              threads: int = 1) -> SearchOutcome:
    """Exact ``t(l, k)``: largest ``n`` such that some tournament on ``n`` vertices has a clean colouring."""
    if l < 1 or k < 1:
        raise ValueError("need l, k >= 1")
    witness = _lower_witness(l, k)
    value = witness.n
    n_cap = min(value + 1, DEFAULT_TOURNAMENT_CAP) if n_cap is None else n_cap
    out = SearchOutcome(l, k, "t", value, False, witness, None, False)
    for n in range(value + 1, n_cap + 1):
        stats = SearchStats()
        good = None
        reps = enumerate_tournaments(n, cap=max(n_cap, DEFAULT_TOURNAMENT_CAP))
        for t in reps:
            res = forcing_check(t, l, k, budget, threads)
            stats.add(res.stats)
            if res.status == BUDGET_EXCEEDED:
                out.history.append(SizeRecord(n, "budget", stats, len(reps)))
                out.budget_exceeded = True
                return out
            if res.status == COUNTEREXAMPLE:
                good = res.coloring
                break
        if good is not None:
            out.history.append(SizeRecord(n, "good", stats, len(reps)))
            out.value, out.witness = n, good
            continue
        out.history.append(SizeRecord(n, "forced", stats, len(reps)))
        out.exact = True
        out.forcing_stats = stats
        return out
    return out


@dataclass(frozen=True)
class ScanEntry:
    size: int
    code: int
    tournament: Tournament
    is_reversed_edge: bool
    at_most_f: bool  # size <= f(l, k)
    stats: SearchStats

    def to_dict(self) -> dict:
        return {"size": self.size, "code": self.code, "edges": self.tournament.edges(),
                "is_reversed_edge": self.is_reversed_edge, "at_most_f": self.at_most_f,
                "stats": asdict(self.stats)}


def known_f(l: int, k: int) -> int | None:
    if l == 2 or k == 1 or l == 1:
        return l ** (k - 1) if l >= 1 else None
    return None


def adversarial_scan(l: int, k: int, n_cap: int | None = None, f_value: int | None = None,
                     budget: int | None = None, threads: int = 1) -> list[ScanEntry]:
    """Non-transitive tournaments on which every colouring has an ``l``-flash or ``k``-rainbow.

    Sizes ``2..n_cap`` are scanned (default ``n_cap = f``); entries with size at
    most ``f`` are the ones smaller than the transitive threshold.
    """
    if f_value is None:
        f_value = known_f(l, k)
    if f_value is None:
        res = compute_f(l, k, budget=budget, threads=threads)
        if not res.exact:
            raise FlashbowError("f(l,k) could not be determined exactly")
        f_value = res.value
    n_cap = f_value if n_cap is None else n_cap
    out = []
    for n in range(2, n_cap + 1):
        rev_code = canonical_code(reversed_edge_tournament(n).adj)[0] if n >= 3 else None
        for t in enumerate_tournaments(n, cap=max(n_cap, DEFAULT_TOURNAMENT_CAP)):
            if t.is_transitive():
                continue
            res = forcing_check(t, l, k, budget, threads)
            if res.status == BUDGET_EXCEEDED:
                raise FlashbowError(f"budget exceeded on a tournament of size {n}")
            if res.status == FORCED:
                code = canonical_code(t.adj)[0]
                out.append(ScanEntry(n, code, t, code == rev_code, n <= f_value, res.stats))
    out.sort(key=lambda e: (e.size, e.code))
    return out
