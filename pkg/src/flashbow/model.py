"""Tournaments, edge colourings and walks.

Vertices are labelled ``1..n`` at the API.  Internally a tournament is an
``(n, n)`` boolean matrix ``adj`` with ``adj[u-1, v-1]`` true iff ``u -> v``,
and a colouring is an ``(n, n)`` integer matrix holding the colour of each
directed edge and ``0`` everywhere else.  Both arrays are read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

FORMAT_VERSION = 1


class FlashbowError(Exception):
    """Base class for all errors raised by this package."""


class InvalidTournament(FlashbowError, ValueError):
    pass


class InvalidWalk(FlashbowError, ValueError):
    pass


class EctParseError(FlashbowError, ValueError):
    """Raised for malformed ect input."""


class MalformedHeader(EctParseError):
    pass


class MalformedLine(EctParseError):
    pass


class MissingEdge(EctParseError):
    pass


class DuplicateEdge(EctParseError):
    pass


class BothOrientations(EctParseError):
    pass


class NonPositiveColor(EctParseError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def pair_order(n: int) -> list[tuple[int, int]]:
    """Unordered vertex pairs ``(u, v)``, ``u < v``, in lexicographic order."""
    return [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]


class Tournament:
    """An orientation of the complete graph on ``1..n``."""

    __slots__ = ("adj",)

    def __init__(self, adj):
        adj = np.asarray(adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise InvalidTournament("adjacency must be a non-empty square matrix")
        if adj.diagonal().any():
            raise InvalidTournament("tournaments have no loops")
        off = ~np.eye(adj.shape[0], dtype=bool)
        if not np.array_equal((adj ^ adj.T)[off], np.ones(off.sum(), dtype=bool)):
            raise InvalidTournament("every pair needs exactly one orientation")
        self.adj = _frozen(adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tournament":
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            adj[u - 1, v - 1] = True
        return cls(adj)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def has_edge(self, u: int, v: int) -> bool:
        return 1 <= u <= self.n and 1 <= v <= self.n and bool(self.adj[u - 1, v - 1])

    def edges(self) -> list[tuple[int, int]]:
        """Directed edges, listed in the fixed pair order."""
        return [(u, v) if self.adj[u - 1, v - 1] else (v, u) for u, v in pair_order(self.n)]

    def out_neighbors(self, v: int) -> list[int]:
        return [int(w) + 1 for w in np.flatnonzero(self.adj[v - 1])]

    def in_neighbors(self, v: int) -> list[int]:
        return [int(w) + 1 for w in np.flatnonzero(self.adj[:, v - 1])]

    def reversed(self) -> "Tournament":
        return Tournament(self.adj.T)

    def induced(self, vertices: Sequence[int]) -> "Tournament":
        """Sub-tournament on ``vertices``, relabelled ``1..len(vertices)`` in the given order."""
        idx = np.asarray(vertices, dtype=int) - 1
        return Tournament(self.adj[np.ix_(idx, idx)])

    def is_transitive(self) -> bool:
        # transitive iff the score sequence is 0, 1, ..., n-1
        return sorted(self.adj.sum(axis=1).tolist()) == list(range(self.n))

    def __eq__(self, other):
        return isinstance(other, Tournament) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self):
        return f"Tournament(n={self.n}, edges={self.edges()})"


def new_transitive(n: int) -> Tournament:
    """The increasing transitive tournament: ``u -> v`` iff ``u < v``."""
    if n < 1:
        raise InvalidTournament("n must be positive")
    return Tournament(np.triu(np.ones((n, n), dtype=bool), k=1))


def random_tournament(n: int, seed: int) -> Tournament:
    """Each pair oriented by an independent fair coin; deterministic in ``(n, seed)``."""
    if n < 1:
        raise InvalidTournament("n must be positive")
    rng = np.random.default_rng(seed)
    coins = rng.random(n * (n - 1) // 2) < 0.5
    upper = np.zeros((n, n), dtype=bool)
    upper[np.triu_indices(n, k=1)] = coins
    lower = np.zeros((n, n), dtype=bool)
    lower[np.triu_indices(n, k=1)] = ~coins
    return Tournament(upper | lower.T)


class ColoredTournament:
    """A tournament together with a positive colour on every edge."""

    __slots__ = ("tournament", "colors")

    def __init__(self, tournament: Tournament, coloring):
        n = tournament.n
        if isinstance(coloring, Mapping):
            mat = np.zeros((n, n), dtype=np.int64)
            for (u, v), c in coloring.items():
                if not tournament.has_edge(u, v):
                    raise InvalidTournament(f"{u}->{v} is not an edge")
                mat[u - 1, v - 1] = c
        else:
            mat = np.asarray(coloring, dtype=np.int64)
            if mat.shape != (n, n):
                raise InvalidTournament("colour matrix has the wrong shape")
        if not np.array_equal(mat > 0, tournament.adj):
            raise InvalidTournament("colouring must give a positive colour to exactly the edges")
        self.tournament = tournament
        self.colors = _frozen(mat)

    @classmethod
    def from_edges(cls, n: int, colored_edges: Iterable[tuple[int, int, int]]) -> "ColoredTournament":
        colored_edges = list(colored_edges)
        t = Tournament.from_edges(n, [(u, v) for u, v, _ in colored_edges])
        return cls(t, {(u, v): c for u, v, c in colored_edges})

    @classmethod
    def monochromatic(cls, tournament: Tournament, color: int = 1) -> "ColoredTournament":
        return cls(tournament, tournament.adj.astype(np.int64) * color)

    @property
    def n(self) -> int:
        return self.tournament.n

    def color(self, u: int, v: int) -> int:
        if not self.tournament.has_edge(u, v):
            raise InvalidWalk(f"{u}->{v} is not an edge")
        return int(self.colors[u - 1, v - 1])

    def coloring(self) -> dict[tuple[int, int], int]:
        return {(u, v): int(self.colors[u - 1, v - 1]) for u, v in self.tournament.edges()}

    def colored_edges(self) -> list[tuple[int, int, int]]:
        return [(u, v, int(self.colors[u - 1, v - 1])) for u, v in self.tournament.edges()]

    def palette(self) -> tuple[int, ...]:
        """Distinct colours actually used, ascending."""
        return tuple(int(c) for c in np.unique(self.colors[self.colors > 0]))

    def reversed(self) -> "ColoredTournament":
        return ColoredTournament(self.tournament.reversed(), self.colors.T)

    def induced(self, vertices: Sequence[int]) -> "ColoredTournament":
        idx = np.asarray(vertices, dtype=int) - 1
        return ColoredTournament(self.tournament.induced(vertices), self.colors[np.ix_(idx, idx)])

    def __eq__(self, other):
        return isinstance(other, ColoredTournament) and np.array_equal(self.colors, other.colors)

    def __hash__(self):
        return hash((self.n, self.colors.tobytes()))

    def __repr__(self):
        return f"ColoredTournament(n={self.n}, palette={self.palette()})"


@dataclass(frozen=True)
class FlashCertificate:
    walk: tuple[int, ...]
    color: int

    @property
    def length(self) -> int:
        return len(self.walk) - 1


@dataclass(frozen=True)
class RainbowCertificate:
    walk: tuple[int, ...]
    colors: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.walk) - 1


def walk_colors(ct: ColoredTournament, walk: Sequence[int]) -> tuple[int, ...]:
    """Edge colours along ``walk``; empty for a walk of length 0."""
    if len(walk) == 0:
        raise InvalidWalk("a walk has at least one vertex")
    for v in walk:
        if not 1 <= v <= ct.n:
            raise InvalidWalk(f"vertex {v} out of range")
    out = []
    for u, v in zip(walk, walk[1:]):
        if not ct.tournament.has_edge(u, v):
            raise InvalidWalk(f"{u}->{v} is not an edge")
        out.append(int(ct.colors[u - 1, v - 1]))
    return tuple(out)


def is_walk(t: Tournament, walk: Sequence[int]) -> bool:
    return len(walk) > 0 and all(1 <= v <= t.n for v in walk) and all(
        t.has_edge(u, v) for u, v in zip(walk, walk[1:]))


# -- ect text format ---------------------------------------------------------

def serialize(ct: ColoredTournament, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"ect {FORMAT_VERSION} {ct.n}")
    lines.extend(f"{u} {v} {c}" for u, v, c in ct.colored_edges())
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def parse(text: str) -> ColoredTournament:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise MalformedHeader("empty input") from None
    if len(header) != 3 or header[0] != "ect" or header[1] != str(FORMAT_VERSION):
        raise MalformedHeader(f"line {lineno}: expected 'ect {FORMAT_VERSION} <n>'")
    try:
        n = int(header[2])
    except ValueError:
        raise MalformedHeader(f"line {lineno}: bad vertex count {header[2]!r}") from None
    if n < 1:
        raise MalformedHeader(f"line {lineno}: vertex count must be positive")

    seen: dict[tuple[int, int], tuple[int, int, int]] = {}
    for lineno, fields in lines:
        if len(fields) != 3:
            raise MalformedLine(f"line {lineno}: expected '<u> <v> <c>'")
        try:
            u, v, c = (int(f) for f in fields)
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer field") from None
        if not (1 <= u <= n and 1 <= v <= n) or u == v:
            raise MalformedLine(f"line {lineno}: bad edge {u} {v}")
        if c <= 0:
            raise NonPositiveColor(f"line {lineno}: colour {c} is not positive")
        key = (min(u, v), max(u, v))
        if key in seen:
            if seen[key][:2] == (u, v):
                raise DuplicateEdge(f"line {lineno}: edge {u} {v} listed twice")
            raise BothOrientations(f"line {lineno}: both orientations of {{{u}, {v}}}")
        seen[key] = (u, v, c)
    missing = [p for p in pair_order(n) if p not in seen]
    if missing:
        raise MissingEdge(f"no edge for pair {missing[0]} ({len(missing)} missing)")
    return ColoredTournament.from_edges(n, seen.values())


def to_dict(ct: ColoredTournament) -> dict:
    """Structured mirror of the ect format."""
    return {"format": "ect", "version": FORMAT_VERSION, "n": ct.n,
            "edges": [list(e) for e in ct.colored_edges()]}


def from_dict(data: Mapping) -> ColoredTournament:
    if data.get("format") != "ect" or data.get("version") != FORMAT_VERSION:
        raise MalformedHeader("not an ect document")
    text = serialize_lines(int(data["n"]), [tuple(e) for e in data["edges"]])
    return parse(text)


def serialize_lines(n: int, colored_edges: Iterable[tuple[int, int, int]]) -> str:
    body = "".join(f"{u} {v} {c}\n" for u, v, c in colored_edges)
    return f"ect {FORMAT_VERSION} {n}\n" + body


def dumps_json(ct: ColoredTournament) -> str:
    return json.dumps(to_dict(ct), sort_keys=True)


def loads_json(text: str) -> ColoredTournament:
    return from_dict(json.loads(text))
