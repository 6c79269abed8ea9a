import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flashbow.construct import (BlockColoringFailed, SizeCapExceeded, TooLarge, antichain_coloring,
                                antichain_labels, antichain_size, block_coloring, grid_coloring,
                                grid_label, grid_labels, reversed_edge_tournament, transitive_blocks)
from flashbow.detect import color_profiles, is_flash_rainbow_free, longest_flash, longest_rainbow
from flashbow.model import ColoredTournament, new_transitive, random_tournament

from oracles import composition_count, grid_color_oracle


def test_grid_2_3_colours():
    ct = grid_coloring(2, 3)
    assert ct.n == 4
    assert ct.coloring() == {(1, 2): 2, (1, 3): 1, (1, 4): 1, (2, 3): 1, (2, 4): 1, (3, 4): 2}


@pytest.mark.parametrize("l", [1, 2, 5])
def test_grid_k2_is_monochromatic(l):
    ct = grid_coloring(l, 2)
    assert ct.n == l
    assert ct.tournament.is_transitive()
    assert set(ct.coloring().values()) <= {1}


def test_grid_3_3():
    ct = grid_coloring(3, 3)
    assert ct.n == 9
    assert longest_flash(ct).length == 2
    assert longest_rainbow(ct, 3).length == 2


@pytest.mark.parametrize("l,k", [(2, 3), (3, 3), (2, 4), (3, 4), (4, 3), (2, 5)])
def test_grid_matches_label_oracle(l, k):
    labels, colors = grid_color_oracle(l, k)
    ct = grid_coloring(l, k)
    assert ct.coloring() == colors
    assert [tuple(x) for x in grid_labels(l, k).tolist()] == labels
    # the colour index always marks a strict increase
    for (u, v), i in colors.items():
        assert labels[u - 1][i - 1] < labels[v - 1][i - 1]
    assert len(ct.palette()) <= k - 1


def test_grid_size_cap():
    with pytest.raises(SizeCapExceeded):
        grid_coloring(10, 6, size_cap=1000)


@pytest.mark.parametrize("args, want", [((1, 2, 3), (1, 1)), ((4, 2, 3), (2, 2)), ((5, 3, 3), (2, 2))])
def test_grid_label(args, want):
    assert grid_label(*args) == want


def test_grid_label_range():
    with pytest.raises(IndexError):
        grid_label(5, 2, 3)


def test_antichain_labels():
    assert antichain_labels(4, 3) == [(1, 3), (2, 2), (3, 1)]
    assert antichain_labels(2, 4) == [(1, 1, 1)]
    # floor(2*2/2) = 2 leaves only the all-ones string
    assert antichain_labels(2, 3) == [(1, 1)]
    assert antichain_labels(3, 3) == [(1, 2), (2, 1)]


@pytest.mark.parametrize("l", range(1, 7))
@pytest.mark.parametrize("k", range(2, 6))
def test_antichain_size_matches_counting(l, k):
    labels = antichain_labels(l, k)
    assert antichain_size(l, k) == len(labels) == composition_count(l, k)
    assert len(set(labels)) == len(labels)
    target = l * (k - 1) // 2
    assert all(sum(x) == target and all(1 <= c <= l for c in x) for x in labels)


def test_antichain_is_antichain():
    labels = antichain_labels(4, 4)
    for x in labels:
        for y in labels:
            if x != y:
                assert not all(a <= b for a, b in zip(x, y))


def test_antichain_colors_three_cycle():
    ct = antichain_coloring(reversed_edge_tournament(3), 4, 3)
    assert longest_flash(ct).length < 4
    assert longest_rainbow(ct, 3).length < 3


def test_antichain_single_vertex():
    assert antichain_coloring(new_transitive(1), 4, 3).coloring() == {}


def test_antichain_transitive():
    ct = antichain_coloring(new_transitive(3), 4, 3)
    assert set(ct.coloring().values()) <= {1, 2}
    assert is_flash_rainbow_free(ct, 4, 3)


def test_antichain_too_large():
    with pytest.raises(TooLarge):
        antichain_coloring(new_transitive(4), 4, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(3, 4), st.integers(0, 10**6), st.data())
def test_antichain_random_tournaments(l, k, seed, data):
    size = antichain_size(l, k)
    n = data.draw(st.integers(1, min(size, 12)))
    ct = antichain_coloring(random_tournament(n, seed), l, k)
    assert is_flash_rainbow_free(ct, l, k)


def test_reversed_edge_3():
    assert sorted(reversed_edge_tournament(3).edges()) == [(1, 2), (2, 3), (3, 1)]


def test_reversed_edge_4():
    t = reversed_edge_tournament(4)
    assert t.has_edge(4, 1) and not t.has_edge(1, 4)
    others = [(u, v) for u, v in t.edges() if (u, v) != (4, 1)]
    assert all(u < v for u, v in others) and len(others) == 5
    # directed 4-cycles: 1,2,3,4 is the only one
    cycles = [p for p in [(1, 2, 3, 4)] if all(t.has_edge(p[i], p[(i + 1) % 4]) for i in range(4))]
    assert cycles == [(1, 2, 3, 4)]


def test_reversed_edge_guard():
    with pytest.raises(ValueError):
        reversed_edge_tournament(2)


def test_transitive_blocks_partition():
    for seed in range(10):
        t = random_tournament(11, seed)
        blocks = transitive_blocks(t, 3, seed)
        assert sorted(v for b in blocks for v in b) == list(range(1, 12))
        for b in blocks:
            assert len(b) <= 3
            assert t.induced(b).is_transitive()


def test_block_transitive_4_does_not_fit_l4():
    # one block of size 4 would need a=2, but block_size=2 gives two blocks; b must cover
    # an antichain of size 2, and |X(2,3)| = 1, so b = 3 and a*b = 6 > 4
    with pytest.raises(BlockColoringFailed) as e:
        block_coloring(new_transitive(4), 4, 3, 2)
    assert e.value.params["a"] == 2 and e.value.params["b"] == 3


def test_block_transitive_4_l6():
    res = block_coloring(new_transitive(4), 6, 3, 2)
    assert (res.inner_l, res.outer_l) == (2, 3)
    assert is_flash_rainbow_free(res.coloring, 6, 3)


def test_block_size_one_is_antichain():
    t = random_tournament(5, 3)
    res = block_coloring(t, 6, 3, 1)
    assert res.inner_l == 1
    assert all(len(b) == 1 for b in res.blocks)
    assert res.outer_l == min(b for b in range(1, 7) if antichain_size(b, 3) >= 5)
    assert is_flash_rainbow_free(res.coloring, 6, 3)


def test_block_failure_parameters():
    with pytest.raises(BlockColoringFailed):
        block_coloring(random_tournament(10, 0), 2, 3, 4)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 14), st.integers(0, 10**6), st.integers(1, 4))
def test_block_coloring_is_free_when_it_succeeds(n, seed, bs):
    t = random_tournament(n, seed)
    try:
        res = block_coloring(t, 12, 3, bs, seed)
    except BlockColoringFailed:
        return
    assert is_flash_rainbow_free(res.coloring, 12, 3)
