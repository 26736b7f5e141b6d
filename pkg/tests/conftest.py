"""Shared fixtures.

The exhaustive small-n censuses are the most expensive shared resource, so
they are computed lazily and cached for the whole session.  Everything else
is cheap enough to build inline.
"""

import pytest
from hypothesis import strategies as st

from degprice.costs import GameConfig
from degprice.graph import OwnedGraph
from degprice.oracle import equilibrium_census


@st.composite
def owned_graphs(draw, max_n=8, connected=False):
    """Random ownership-labeled graphs, optionally forced connected.

    Connectivity is ensured with a random spanning tree first; extra edges
    (random orientation) are sprinkled on top either way.
    """
    min_n = 2 if connected else 1
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    g = OwnedGraph(n)
    if connected and n > 1:
        perm = draw(st.permutations(list(range(n))))
        for i in range(1, n):
            other = perm[draw(st.integers(0, i - 1))]
            if draw(st.booleans()):
                g.add_edge(perm[i], other)
            else:
                g.add_edge(other, perm[i])
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    for a, b in draw(st.lists(pairs, max_size=12)):
        if a != b and not g.has_edge(a, b):
            g.add_edge(a, b)
    return g


class _CensusCache:
    def __init__(self):
        self._cache = {}

    def get(self, variant, locality_k, n):
        key = (variant, locality_k, n)
        if key not in self._cache:
            cfg = GameConfig(variant=variant, locality_k=locality_k)
            self._cache[key] = equilibrium_census(n, cfg)
        return self._cache[key]


@pytest.fixture(scope="session")
def census():
    """Lazy per-(variant, locality, n) census cache."""
    return _CensusCache()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one pass/fail line per acceptance criterion after the run."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" not in nodeid:
                continue
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            name = nodeid.split("::")[-1]
            lines[name] = "PASS" if outcome == "passed" else "FAIL"
    if lines:
        terminalreporter.section("acceptance criteria")
        for name in sorted(lines):
            terminalreporter.write_line(f"{name}: {lines[name]}")
