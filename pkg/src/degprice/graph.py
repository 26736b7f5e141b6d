"""Ownership-labeled undirected graphs and structural diagnostics.

Nodes are dense integer ids 0..n-1.  Every edge records which endpoint
bought it; the metric structure (distances, degrees, diameter) always
uses the undirected view.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from degprice._kernels import UNREACHABLE, apsp

__all__ = [
    "UNREACHABLE",
    "OwnedGraph",
    "DistanceRow",
    "bfs_distances",
    "degree",
    "ball",
    "diameter",
    "layer_decomposition",
    "bridges",
    "is_connected",
]


class OwnedGraph:
    """Simple undirected graph where each edge has exactly one owner.

    ``targets(u)`` is u's strategy: the set of nodes u bought edges to.
    Inserting an edge whose undirected counterpart already exists is an
    error rather than a silent dedup, so no multi-edge can ever form.
    """

    __slots__ = ("n", "_targets", "_adj")

    def __init__(self, n, edges=()):
        if n < 1:
            raise ValueError("need at least one node")
        self.n = n
        self._targets = [set() for _ in range(n)]
        self._adj = [set() for _ in range(n)]
        for owner, target in edges:
            self.add_edge(owner, target)

    def _check_node(self, v):
        if not 0 <= v < self.n:
            raise ValueError(f"node id {v} out of range 0..{self.n - 1}")

    def add_edge(self, owner, target):
        self._check_node(owner)
        self._check_node(target)
        if owner == target:
            raise ValueError(f"self-loop at node {owner}")
        if target in self._adj[owner]:
            raise ValueError(f"edge {{{owner},{target}}} already present")
        self._targets[owner].add(target)
        self._adj[owner].add(target)
        self._adj[target].add(owner)

    def remove_edge(self, owner, target):
        if target not in self._targets[owner]:
            raise ValueError(f"agent {owner} owns no edge to {target}")
        self._targets[owner].discard(target)
        self._adj[owner].discard(target)
        self._adj[target].discard(owner)

    def has_edge(self, u, v):
        """True if the undirected edge {u,v} exists, whoever owns it."""
        return v in self._adj[u]

    def owns(self, owner, target):
        return target in self._targets[owner]

    def targets(self, u):
        """Strategy of u: targets of the edges u owns (fresh set)."""
        return set(self._targets[u])

    def neighbors(self, u):
        return set(self._adj[u])

    @property
    def owned_edges(self):
        return {(u, v) for u in range(self.n) for v in self._targets[u]}

    @property
    def edge_count(self):
        return sum(len(t) for t in self._targets)

    def copy(self):
        g = OwnedGraph.__new__(OwnedGraph)
        g.n = self.n
        g._targets = [set(t) for t in self._targets]
        g._adj = [set(a) for a in self._adj]
        return g

    def replace_strategy(self, u, new_targets):
        """Swap out u's entire strategy in place.

        Only edges owned by u change; edges other agents bought toward u
        stay.  Raises if a new target collides with such an edge.
        """
        new_targets = set(new_targets)
        incoming = self._adj[u] - self._targets[u]
        clash = new_targets & incoming
        if clash:
            raise ValueError(f"targets {sorted(clash)} already linked to {u}")
        for v in self._targets[u]:
            self._adj[v].discard(u)
        self._targets[u] = set()
        self._adj[u] = set(incoming)
        for v in new_targets:
            self.add_edge(u, v)

    def adjacency_matrix(self):
        m = np.zeros((self.n, self.n), dtype=bool)
        for u in range(self.n):
            for v in self._adj[u]:
                m[u, v] = True
        return m

    def state_key(self):
        """Canonical hashable identity: (n, sorted owned edge list)."""
        return (self.n, tuple(sorted(self.owned_edges)))

    def __eq__(self, other):
        if not isinstance(other, OwnedGraph):
            return NotImplemented
        return self.n == other.n and self._targets == other._targets

    def __repr__(self):
        return f"OwnedGraph(n={self.n}, edges={sorted(self.owned_edges)})"


@dataclass(frozen=True, eq=False)
class DistanceRow:
    """Hop distances from one source; unreachable nodes hold the sentinel."""

    source: int
    dist: np.ndarray = field(repr=False)

    def __getitem__(self, v):
        return int(self.dist[v])


def bfs_distances(g, source):
    """Exact hop distances from source over the undirected view."""
    g._check_node(source)
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        dx = dist[x]
        for y in g._adj[x]:
            if dist[y] == UNREACHABLE:
                dist[y] = dx + 1
                queue.append(y)
    return DistanceRow(source=source, dist=dist)


def degree(g, v):
    """Number of incident undirected edges, regardless of ownership."""
    g._check_node(v)
    return len(g._adj[v])


def ball(g, u, k):
    """Exactly the nodes at distance k from u (k=0 gives {u})."""
    if k < 0:
        raise ValueError("radius must be nonnegative")
    row = bfs_distances(g, u)
    return {v for v in range(g.n) if row.dist[v] == k}


def diameter(g):
    """Largest finite distance, or UNREACHABLE when disconnected."""
    dist = apsp(g.adjacency_matrix())
    worst = int(dist.max())
    return UNREACHABLE if worst >= UNREACHABLE else worst


def is_connected(g):
    return g.n == 1 or int(bfs_distances(g, 0).dist.max()) < UNREACHABLE


def layer_decomposition(g, root):
    """BFS layers L_0={root}, L_1, ... partitioning a connected graph."""
    row = bfs_distances(g, root)
    if int(row.dist.max()) >= UNREACHABLE:
        raise ValueError("layer decomposition needs a connected graph")
    depth = int(row.dist.max())
    layers = [set() for _ in range(depth + 1)]
    for v in range(g.n):
        layers[int(row.dist[v])].add(v)
    return layers


def bridges(g):
    """Undirected edges whose removal disconnects their component.

    Iterative low-link search; output is a set of sorted node pairs.
    """
    disc = [0] * g.n
    low = [0] * g.n
    visited = [False] * g.n
    out = set()
    counter = 1
    for start in range(g.n):
        if visited[start]:
            continue
        stack = [(start, -1, iter(sorted(g._adj[start])))]
        visited[start] = True
        disc[start] = low[start] = counter
        counter += 1
        while stack:
            node, parent, it = stack[-1]
            advanced = False
            for nxt in it:
                if not visited[nxt]:
                    visited[nxt] = True
                    disc[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append((nxt, node, iter(sorted(g._adj[nxt]))))
                    advanced = True
                    break
                if nxt != parent:
                    low[node] = min(low[node], disc[nxt])
            if not advanced:
                stack.pop()
                if parent >= 0:
                    low[parent] = min(low[parent], low[node])
                    if low[node] > disc[parent]:
                        out.add((min(parent, node), max(parent, node)))
    return out
