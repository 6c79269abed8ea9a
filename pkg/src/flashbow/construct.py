"""Explicit colourings that avoid ``l``-flashes and ``k``-rainbows.

Every generator labels vertices with strings over ``1..l`` of length ``k-1`` and
colours an edge ``u -> v`` by the smallest index at which the label of ``u`` is
smaller than the label of ``v``.  A flash of colour ``i`` then strictly raises
coordinate ``i`` at every step, and only ``k-1`` colours exist.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import detect
from .model import ColoredTournament, FlashbowError, Tournament, new_transitive

DEFAULT_SIZE_CAP = 10_000


class SizeCapExceeded(FlashbowError, ValueError):
    pass


class TooLarge(FlashbowError, ValueError):
    pass


class ConstructionCheckFailed(FlashbowError, AssertionError):
    """A generated colouring failed its own flash/rainbow verification."""


class BlockColoringFailed(FlashbowError):
    def __init__(self, reason: str, **params):
        super().__init__(reason)
        self.reason = reason
        self.params = params


def grid_label(index: int, l: int, k: int) -> tuple[int, ...]:
    """The ``index``-th (1-based) string of ``[l]^(k-1)`` in lexicographic order."""
    if l < 1 or k < 1:
        raise ValueError("l and k must be positive")
    if not 1 <= index <= l ** (k - 1):
        raise IndexError(f"index {index} outside 1..{l ** (k - 1)}")
    digits = []
    rest = index - 1
    for _ in range(k - 1):
        rest, d = divmod(rest, l)
        digits.append(d + 1)
    return tuple(reversed(digits))


def _first_increase(labels: np.ndarray) -> np.ndarray:
    """Colour matrix: ``out[u, v]`` = smallest 1-based ``i`` with ``labels[u, i] < labels[v, i]``, else 0."""
    less = labels[:, None, :] < labels[None, :, :]
    has = less.any(axis=2)
    return np.where(has, less.argmax(axis=2) + 1, 0)


def _label_coloring(t: Tournament, labels: np.ndarray) -> ColoredTournament:
    first = _first_increase(labels)
    colors = np.where(t.adj, first, 0)
    if (colors[t.adj] == 0).any():
        raise ValueError("some edge has no increasing coordinate")
    return ColoredTournament(t, colors)


def _self_check(ct: ColoredTournament, l: int, k: int) -> None:
    flash = detect.longest_flash(ct).length
    rainbow = detect.longest_rainbow(ct, k).length
    if not (flash < l and rainbow < k):
        raise ConstructionCheckFailed(f"flash={flash}, rainbow={rainbow} for l={l}, k={k}")


def grid_labels(l: int, k: int) -> np.ndarray:
    """All of ``[l]^(k-1)`` in lexicographic order, one row per label."""
    rows = list(itertools.product(range(1, l + 1), repeat=k - 1))
    return np.array(rows, dtype=np.int64).reshape(len(rows), k - 1)


def grid_coloring(l: int, k: int, size_cap: int = DEFAULT_SIZE_CAP, verify: bool = True) -> ColoredTournament:
    """Transitive tournament on ``l^(k-1)`` lexicographically ordered labels."""
    if l < 1 or k < 2:
        raise ValueError("need l >= 1 and k >= 2")
    n = l ** (k - 1)
    if n > size_cap:
        raise SizeCapExceeded(f"{n} vertices exceeds cap {size_cap}")
    ct = _label_coloring(new_transitive(n), grid_labels(l, k))
    if verify:
        _self_check(ct, l, k)
    return ct


def antichain_target(l: int, k: int) -> int:
    return l * (k - 1) // 2


def antichain_labels(l: int, k: int) -> list[tuple[int, ...]]:
    """Strings in ``[l]^(k-1)`` whose entries sum to ``floor(l(k-1)/2)``, lexicographically."""
    if l < 1 or k < 2:
        raise ValueError("need l >= 1 and k >= 2")
    target = antichain_target(l, k)
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        lo = max(1, remaining - l * (slots - 1))
        hi = min(l, remaining - (slots - 1))
        for x in range(lo, hi + 1):
            prefix.append(x)
            extend(prefix, remaining - x, slots - 1)
            prefix.pop()

    extend([], target, k - 1)
    return out


def antichain_size(l: int, k: int) -> int:
    """``|X|`` as the coefficient of ``x^s`` in ``(x + ... + x^l)^(k-1)``."""
    poly = [1]
    step = [0] + [1] * l
    for _ in range(k - 1):
        poly = [sum(poly[j] * step[i - j] for j in range(len(poly)) if 0 <= i - j < len(step))
                for i in range(len(poly) + len(step) - 1)]
    s = antichain_target(l, k)
    return poly[s] if s < len(poly) else 0


def antichain_coloring(t: Tournament, l: int, k: int, verify: bool = True) -> ColoredTournament:
    """Colour any tournament with at most ``|X|`` vertices using antichain labels."""
    labels = antichain_labels(l, k)
    if t.n > len(labels):
        raise TooLarge(f"{t.n} vertices but only {len(labels)} antichain labels")
    ct = _label_coloring(t, np.array(labels[:t.n], dtype=np.int64).reshape(t.n, k - 1))
    if verify:
        _self_check(ct, l, k)
    return ct


def reversed_edge_tournament(n: int) -> Tournament:
    """Increasing transitive tournament on ``[n]`` with the pair ``{1, n}`` flipped to ``n -> 1``."""
    if n < 3:
        raise ValueError("need n >= 3")
    adj = np.array(new_transitive(n).adj)
    adj[0, n - 1] = False
    adj[n - 1, 0] = True
    return Tournament(adj)


def transitive_blocks(t: Tournament, block_size: int, seed: int = 0) -> list[list[int]]:
    """Greedy partition into transitive pieces of size at most ``block_size``.

    Vertices are scanned in a forward-edge-maximising order; each pass keeps a
    vertex when every vertex already kept beats it.
    """
    from .structure import forward_max_ordering

    if block_size < 1:
        raise ValueError("block_size must be positive")
    remaining = forward_max_ordering(t, seed)
    blocks = []
    while remaining:
        block, rest = [], []
        for v in remaining:
            if len(block) < block_size and all(t.has_edge(b, v) for b in block):
                block.append(v)
            else:
                rest.append(v)
        blocks.append(block)
        remaining = rest
    return blocks


@dataclass(frozen=True)
class BlockColoring:
    coloring: ColoredTournament
    blocks: tuple[tuple[int, ...], ...]
    inner_l: int  # a
    outer_l: int  # b


def block_coloring(t: Tournament, l: int, k: int, block_size: int, seed: int = 0,
                   verify: bool = True) -> BlockColoring:
    """Grid colourings inside transitive blocks, antichain colouring between blocks.

    Raises ``BlockColoringFailed`` when the parameters do not fit (``a * b > l``
    or too many blocks for any antichain).
    """
    if k < 2:
        raise ValueError("need k >= 2")
    blocks = transitive_blocks(t, block_size, seed)
    a = 1
    while a ** (k - 1) < block_size:
        a += 1
    q = len(blocks)
    if q == 1:
        b = 1
    elif k == 2:
        raise BlockColoringFailed("quotient too large", blocks=q, a=a)
    else:
        b = 1
        while antichain_size(b, k) < q:
            b += 1
    if a * b > l:
        raise BlockColoringFailed("a*b > l", a=a, b=b, l=l, blocks=q)

    inner = np.zeros((t.n, k - 1), dtype=np.int64)
    outer = np.zeros((t.n, k - 1), dtype=np.int64)
    outer_labels = antichain_labels(b, k) if q > 1 else [(1,) * (k - 1)]
    for bi, block in enumerate(blocks):
        for pos, v in enumerate(block, start=1):
            inner[v - 1] = grid_label(pos, a, k)
            outer[v - 1] = outer_labels[bi]
    block_of = np.zeros(t.n, dtype=np.int64)
    for bi, block in enumerate(blocks):
        block_of[np.asarray(block) - 1] = bi
    same = block_of[:, None] == block_of[None, :]
    colors = np.where(same, _first_increase(inner), _first_increase(outer))
    colors = np.where(t.adj, colors, 0)
    ct = ColoredTournament(t, colors)
    if verify:
        _self_check(ct, l, k)
    return BlockColoring(ct, tuple(tuple(b_) for b_ in blocks), a, b)
