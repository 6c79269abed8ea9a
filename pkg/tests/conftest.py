import sys
import numpy as np
import pytest

from flashbow.model import ColoredTournament, random_tournament


def random_colored(n, seed, max_colors=None):
    """Random tournament with uniformly random edge colours from 1..max_colors."""
    t = random_tournament(n, seed)
    rng = np.random.default_rng(seed + 10_000)
    e = n * (n - 1) // 2
    palette = max_colors or max(1, int(rng.integers(1, min(e, 6) + 1))) if e else 1
    colors = np.where(t.adj, rng.integers(1, palette + 1, size=(n, n)), 0)
    return ColoredTournament(t, colors)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
