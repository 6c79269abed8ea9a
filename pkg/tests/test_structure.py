import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flashbow.construct import grid_coloring, reversed_edge_tournament
from flashbow.detect import UNBOUNDED, color_profiles, is_flash_rainbow_free, longest_flash, longest_rainbow
from flashbow.model import ColoredTournament, new_transitive, random_tournament, walk_colors
from flashbow.structure import (NoRobustPivot, PreconditionFlash, PreconditionRainbow,
                                adjusted_flash_values, colors_in_two_flashes, decompose,
                                deletion_expectation_bound, deletion_probability, deletion_trials,
                                forward_edges, forward_max_ordering, half_domination_holds,
                                in_robust_radii, in_robust_radius, sample_deletion, sample_flash_window,
                                strongly_robust_vertices, window_trials)

from conftest import random_colored
from oracles import brute_in_robust_radius, brute_rainbow_endings


def test_deletion_probability_solves_quadratic():
    for l in range(2, 20):
        p = deletion_probability(l)
        assert (l - 2) * p * p + 2 * p == pytest.approx(1.0)


def test_adjusted_values_in_only():
    ct = ColoredTournament.monochromatic(new_transitive(3), 4)
    # vertex 3 only receives colour 4
    assert adjusted_flash_values(ct, 3)[4].tolist() == [0, 1, 2]
    with pytest.raises(PreconditionFlash):
        adjusted_flash_values(ct, 2)


def test_deletion_single_edge():
    ct = ColoredTournament.monochromatic(new_transitive(2))
    for seed in range(50):
        assert len(sample_deletion(ct, 2, seed).survivors) <= 1


def test_deletion_grid_3_3():
    ct = grid_coloring(3, 3)
    batch = deletion_trials(ct, 3, 10_000, seed=1)
    assert batch.sizes.max() <= 1
    assert batch.sizes.mean() >= 0.9 * deletion_expectation_bound(ct, 3)


def test_sample_matches_first_trial():
    ct = grid_coloring(3, 3)
    for seed in range(20):
        assert sample_deletion(ct, 3, seed).survivors == deletion_trials(ct, 3, 1, seed).survivor_set(0)
        assert sample_deletion(ct, 3, seed) == sample_deletion(ct, 3, seed)


def test_window_full_is_everything():
    ct = grid_coloring(3, 3)
    assert sample_flash_window(ct, 3, 3, 0).survivors == frozenset(range(1, 10))


def test_window_grid_3_3():
    ct = grid_coloring(3, 3)
    batch = window_trials(ct, 3, 2, 1000, seed=2)
    for t in range(1000):
        s = sorted(batch.survivor_set(t))
        if len(s) > 1:
            assert longest_flash(ct.induced(s)).length <= 1


def test_window_all_distinct_colours():
    t = new_transitive(5)
    ct = ColoredTournament(t, {e: i for i, e in enumerate(t.edges(), start=1)})
    for seed in range(10):
        s = sorted(sample_flash_window(ct, 2, 2, seed).survivors)
        assert longest_flash(ct.induced(s)).length <= 1


def test_radius_cap_zero():
    ct = grid_coloring(2, 3)
    assert in_robust_radii(ct, 0).tolist() == [0] * 4


def test_radius_monochromatic():
    ct = ColoredTournament.monochromatic(new_transitive(4))
    assert in_robust_radii(ct, 3).tolist() == [0] * 4


def test_radius_grid_3_3_brute():
    ct = grid_coloring(3, 3)
    for v in range(1, 10):
        assert in_robust_radius(ct, v, 2) == brute_in_robust_radius(ct, v, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6), st.integers(0, 3))
def test_radius_random_brute(n, seed, cap):
    ct = random_colored(n, seed)
    got = in_robust_radii(ct, cap)
    assert got.tolist() == [brute_in_robust_radius(ct, v, cap) for v in range(1, n + 1)]


def test_strongly_robust_k2_monochromatic():
    ct = ColoredTournament.monochromatic(new_transitive(4), 3)
    rep = strongly_robust_vertices(ct, 2)
    assert rep.strongly_robust() == [1, 2, 3, 4]
    assert all(r.witness_colors == (3,) for r in rep.vertices)


def _brute_strongly_robust(ct, k):
    pal = ct.palette()
    prof = color_profiles(ct)
    ends = brute_rainbow_endings(ct, k - 2)
    starts = brute_rainbow_endings(ct.reversed(), k - 2)
    out = []
    for v in range(1, ct.n + 1):
        for C in itertools.combinations(pal, k - 1):
            C = frozenset(C)
            if prof.incident(v) <= C and all((v, C - {a}) in ends and (v, C - {a}) in starts for a in C):
                out.append(v)
                break
    return out


@pytest.mark.parametrize("ct,k", [(grid_coloring(2, 3), 3), (grid_coloring(3, 3), 3), (grid_coloring(2, 4), 4)])
def test_strongly_robust_brute(ct, k):
    rep = strongly_robust_vertices(ct, k)
    assert rep.strongly_robust() == _brute_strongly_robust(ct, k)
    for row in rep.vertices:
        for a, (end, start) in row.witnesses.items():
            want = set(row.witness_colors) - {a}
            assert end[-1] == row.vertex and start[0] == row.vertex
            assert set(walk_colors(ct, end)) == want == set(walk_colors(ct, start))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10**6))
def test_strongly_robust_random_brute(n, seed):
    ct = random_colored(n, seed)
    k = min(len(ct.palette()) + 1, 4)
    if k < 3:
        return
    assert strongly_robust_vertices(ct, k).strongly_robust() == _brute_strongly_robust(ct, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_two_flash_colours_bounded(n, seed):
    # a strongly robust vertex sees only its k-1 witness colours, so 2-flashes
    # through it use at most k-1 colours
    ct = random_colored(n, seed)
    k = longest_rainbow(ct, len(ct.palette()) + 1).length + 1
    if k < 3:
        return
    rep = strongly_robust_vertices(ct, k)
    from flashbow.detect import m_flash_colors
    through = m_flash_colors(ct, 2)
    for v in rep.strongly_robust():
        assert len(through[v - 1]) <= k - 1
    assert colors_in_two_flashes(ct) == frozenset().union(*through)


def test_ordering_transitive_fixed_point():
    t = new_transitive(6)
    assert forward_max_ordering(t, start=list(range(1, 7))) == list(range(1, 7))


def test_ordering_three_cycle():
    t = reversed_edge_tournament(3)
    counts = sorted(forward_edges(t, p) for p in itertools.permutations([1, 2, 3]))
    # rotations of the cycle keep two edges forward, their reversals only one
    assert counts == [1, 1, 1, 2, 2, 2]
    for seed in range(6):
        order = forward_max_ordering(t, seed)
        assert forward_edges(t, order) == 2
        assert half_domination_holds(t, order)


@pytest.mark.parametrize("seed", range(50))
def test_ordering_half_domination(seed):
    t = random_tournament(8, seed)
    order = forward_max_ordering(t, seed)
    assert sorted(order) == list(range(1, 9))
    assert half_domination_holds(t, order)


def test_decompose_mono_transitive_has_no_pivot():
    # no 2-rainbow exists, so every vertex is in R and nothing is left to pivot on
    ct = ColoredTournament.monochromatic(new_transitive(4))
    with pytest.raises(NoRobustPivot) as e:
        decompose(ct, 3, 2)
    assert e.value.partial.R == frozenset({1, 2, 3, 4})


def test_decompose_rejects_rainbow():
    with pytest.raises(PreconditionRainbow):
        decompose(grid_coloring(2, 3), 2, 1)


def test_decompose_grid_3_3():
    ct = grid_coloring(3, 3)
    dec = decompose(ct, 3, 2)
    assert all(dec.checks.values()), dec.checks
    assert dec.pivot in dec.prefix
    for a, cls in dec.classes.items():
        for members in cls.values():
            m = sorted(members)
            if len(m) > 1:
                assert longest_rainbow(ct.induced(m), 1).length < 1


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 9), st.integers(0, 10**6))
def test_decompose_random_checks(n, seed):
    ct = random_colored(n, seed)
    k = longest_rainbow(ct, len(ct.palette()) + 1).length + 1
    if k < 3 or longest_flash(ct).length is UNBOUNDED:
        return
    for r in range(1, k):
        try:
            dec = decompose(ct, k, r)
        except NoRobustPivot:
            continue
        assert all(dec.checks.values()), dec.checks
