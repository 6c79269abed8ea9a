import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flashbow import model
from flashbow.construct import grid_coloring, reversed_edge_tournament
from flashbow.model import (BothOrientations, ColoredTournament, DuplicateEdge, InvalidTournament,
                            InvalidWalk, MalformedHeader, MalformedLine, MissingEdge, NonPositiveColor,
                            Tournament, new_transitive, parse, random_tournament, serialize, walk_colors)

from conftest import random_colored


def test_transitive_small():
    assert new_transitive(1).edges() == []
    assert new_transitive(3).edges() == [(1, 2), (1, 3), (2, 3)]
    t4 = new_transitive(4)
    assert len(t4.edges()) == 6
    assert all(u < v for u, v in t4.edges())
    assert t4.is_transitive()


def test_transitive_rejects_zero():
    with pytest.raises(InvalidTournament):
        new_transitive(0)


def test_random_tournament_determinism():
    assert random_tournament(1, 7).edges() == []
    assert random_tournament(3, 5) == random_tournament(3, 5)
    outcomes = {random_tournament(5, s) for s in range(100)}
    assert len(outcomes) >= 2


@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_edge_count_is_complete(n):
    for seed in range(5):
        assert len(random_tournament(n, seed).edges()) == n * (n - 1) // 2


def test_tournament_validation():
    with pytest.raises(InvalidTournament):
        Tournament(np.zeros((2, 2), dtype=bool))
    with pytest.raises(InvalidTournament):
        Tournament(np.ones((2, 2), dtype=bool))


def test_colouring_must_cover_edges():
    t = new_transitive(2)
    with pytest.raises(InvalidTournament):
        ColoredTournament(t, {(2, 1): 3})
    with pytest.raises(InvalidTournament):
        ColoredTournament(t, {})


def test_serialize_single_edge():
    ct = ColoredTournament(new_transitive(2), {(1, 2): 1})
    assert serialize(ct) == "ect 1 2\n1 2 1\n"


def test_parse_comments_and_order():
    text = "# hello\nect 1 3\n2 3 4\n\n# mid\n1 3 2\n1 2 7\n"
    ct = parse(text)
    assert ct.coloring() == {(1, 2): 7, (1, 3): 2, (2, 3): 4}


@pytest.mark.parametrize("text, exc", [
    ("", MalformedHeader),
    ("ect 2 3\n", MalformedHeader),
    ("tournament 1 2\n1 2 1\n", MalformedHeader),
    ("ect 1 x\n", MalformedHeader),
    ("ect 1 2\n1 2 1\n2 1 1\n", BothOrientations),
    ("ect 1 2\n1 2 1\n1 2 3\n", DuplicateEdge),
    ("ect 1 3\n1 2 1\n2 3 1\n", MissingEdge),
    ("ect 1 2\n1 2 0\n", NonPositiveColor),
    ("ect 1 2\n1 2 -4\n", NonPositiveColor),
    ("ect 1 2\n1 3 1\n", MalformedLine),
    ("ect 1 2\n1 1 1\n", MalformedLine),
    ("ect 1 2\n1 2\n", MalformedLine),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse(text)


def test_round_trip_grid():
    g = grid_coloring(2, 3)
    assert parse(serialize(g)) == g
    assert model.loads_json(model.dumps_json(g)) == g


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10_000))
def test_round_trip_random(n, seed):
    ct = random_colored(n, seed)
    assert parse(serialize(ct)) == ct
    assert model.from_dict(json.loads(json.dumps(model.to_dict(ct)))) == ct


def test_walk_colors():
    mono = ColoredTournament.monochromatic(new_transitive(3), 7)
    assert walk_colors(mono, [2]) == ()
    assert walk_colors(mono, [1, 2, 3]) == (7, 7)
    # labels (1,1), (1,2), (2,1): first edge differs at index 2, second at index 1
    assert walk_colors(grid_coloring(2, 3), [1, 2, 3]) == (2, 1)


def test_walk_colors_invalid():
    mono = ColoredTournament.monochromatic(new_transitive(3))
    with pytest.raises(InvalidWalk):
        walk_colors(mono, [3, 1])
    with pytest.raises(InvalidWalk):
        walk_colors(mono, [1, 4])
    with pytest.raises(InvalidWalk):
        walk_colors(mono, [])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 1000), st.lists(st.integers(0, 5), min_size=1, max_size=8))
def test_walk_length_matches_colors(n, seed, steps):
    ct = random_colored(n, seed)
    walk = [1]
    for s in steps:
        outs = ct.tournament.out_neighbors(walk[-1])
        if not outs:
            break
        walk.append(outs[s % len(outs)])
    assert model.is_walk(ct.tournament, walk)
    assert len(walk_colors(ct, walk)) == len(walk) - 1


def test_reversed_and_induced():
    ct = grid_coloring(2, 3)
    rev = ct.reversed()
    assert rev.color(2, 1) == ct.color(1, 2)
    sub = ct.induced([2, 4])
    assert sub.n == 2 and sub.color(1, 2) == ct.color(2, 4)
    assert not reversed_edge_tournament(3).is_transitive()
