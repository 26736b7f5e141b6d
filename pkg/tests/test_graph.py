"""Structural layer: ownership bookkeeping, distances, balls, bridges."""

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import owned_graphs
from degprice.graph import (
    UNREACHABLE,
    OwnedGraph,
    bfs_distances,
    ball,
    bridges,
    degree,
    diameter,
    is_connected,
    layer_decomposition,
)


def path(n):
    return OwnedGraph(n, [(i, i + 1) for i in range(n - 1)])


def _floyd_warshall(g):
    """Independent distance oracle for cross-checking BFS."""
    n = g.n
    d = np.full((n, n), UNREACHABLE, dtype=np.int64)
    np.fill_diagonal(d, 0)
    for u, v in g.owned_edges:
        d[u, v] = d[v, u] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i, k] + d[k, j] < d[i, j]:
                    d[i, j] = d[i, k] + d[k, j]
    d[d > UNREACHABLE] = UNREACHABLE
    return d


class TestOwnedGraph:
    def test_rejects_bad_edges(self):
        g = OwnedGraph(3, [(0, 1)])
        with pytest.raises(ValueError, match="already present"):
            g.add_edge(1, 0)
        with pytest.raises(ValueError, match="self-loop"):
            g.add_edge(2, 2)
        with pytest.raises(ValueError, match="out of range"):
            g.add_edge(0, 3)
        with pytest.raises(ValueError):
            OwnedGraph(0)

    def test_remove_requires_ownership(self):
        g = OwnedGraph(2, [(0, 1)])
        with pytest.raises(ValueError, match="owns no edge"):
            g.remove_edge(1, 0)
        g.remove_edge(0, 1)
        assert g.edge_count == 0

    def test_targets_vs_neighbors(self):
        g = OwnedGraph(3, [(0, 1), (2, 1)])
        assert g.targets(1) == set()
        assert g.neighbors(1) == {0, 2}
        assert g.owns(2, 1) and not g.owns(1, 2)
        # mutating the returned set must not leak into the graph
        g.targets(0).clear()
        assert g.targets(0) == {1}

    def test_replace_strategy_keeps_incoming_edges(self):
        g = OwnedGraph(4, [(0, 1), (2, 0), (0, 3)])
        g.replace_strategy(0, {3})
        assert g.owned_edges == {(2, 0), (0, 3)}
        with pytest.raises(ValueError, match="already linked"):
            g.replace_strategy(0, {2, 3})

    def test_equality_is_ownership_sensitive(self):
        a = OwnedGraph(3, [(0, 1), (1, 2)])
        b = OwnedGraph(3, [(0, 1), (2, 1)])
        assert a != b
        assert a.state_key() != b.state_key()
        c = a.copy()
        assert c == a and c.state_key() == a.state_key()
        c.remove_edge(1, 2)
        assert a.owned_edges == {(0, 1), (1, 2)}


@settings(max_examples=60)
@given(owned_graphs())
def test_bfs_matches_floyd_warshall(g):
    expected = _floyd_warshall(g)
    for s in range(g.n):
        assert np.array_equal(bfs_distances(g, s).dist, expected[s])


@settings(max_examples=60)
@given(owned_graphs())
def test_bridges_match_disconnection_definition(g):
    """An edge is a bridge iff removing it separates its endpoints."""
    naive = set()
    for u, v in g.owned_edges:
        h = g.copy()
        h.remove_edge(u, v)
        if bfs_distances(h, u)[v] >= UNREACHABLE:
            naive.add((min(u, v), max(u, v)))
    assert bridges(g) == naive


def test_ball_is_the_exact_distance_shell():
    g = path(5)
    assert ball(g, 0, 0) == {0}
    assert ball(g, 0, 2) == {2}
    assert ball(g, 2, 1) == {1, 3}
    assert ball(g, 0, 9) == set()
    with pytest.raises(ValueError):
        ball(g, 0, -1)


def test_degree_and_diameter():
    g = path(4)
    assert [degree(g, v) for v in range(4)] == [1, 2, 2, 1]
    assert diameter(g) == 3
    clique = OwnedGraph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert diameter(clique) == 1
    assert diameter(OwnedGraph(3, [(0, 1)])) == UNREACHABLE


def test_connectivity_and_layers():
    g = path(4)
    assert is_connected(g)
    assert layer_decomposition(g, 0) == [{0}, {1}, {2}, {3}]
    assert layer_decomposition(g, 1) == [{1}, {0, 2}, {3}]
    lonely = OwnedGraph(3, [(0, 1)])
    assert not is_connected(lonely)
    with pytest.raises(ValueError, match="connected"):
        layer_decomposition(lonely, 0)
    assert is_connected(OwnedGraph(1))
