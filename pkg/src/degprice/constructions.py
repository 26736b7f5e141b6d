"""Named network families, packaged figure networks, and the set-cover
reduction used to show best-response computation is NP-hard.

The gadget in :func:`set_cover_to_best_response_gadget` arranges a
set-cover instance so that one agent's cheapest strategy change under
2-local additions is exactly a minimum set cover: set nodes sit at
distance 2 from the agent, each priced ``q + 1``, while every uncovered
element keeps ``q + 2`` nodes one hop further away than they need to be.
"""

from dataclasses import dataclass, field
from importlib import resources

from degprice.errors import InfeasibleInstanceError
from degprice.graph import OwnedGraph, bfs_distances, degree

CENTER = "center"

FIG2A = "fig2a"
FIG2B = "fig2b"
FIG2C = "fig2c"
FIG2D = "fig2d"
FIG3_G1 = "fig3-g1"
FIG3_G2 = "fig3-g2"
FIG3_G3 = "fig3-g3"
FIG3_G4 = "fig3-g4"
FIG3_G5 = "fig3-g5"
FIG3_G6 = "fig3-g6"

FIGURE_NAMES = (
    FIG2A,
    FIG2B,
    FIG2C,
    FIG2D,
    FIG3_G1,
    FIG3_G2,
    FIG3_G3,
    FIG3_G4,
    FIG3_G5,
    FIG3_G6,
)

__all__ = [
    "CENTER",
    "FIGURE_NAMES",
    "FIG2A",
    "FIG2B",
    "FIG2C",
    "FIG2D",
    "FIG3_G1",
    "FIG3_G2",
    "FIG3_G3",
    "FIG3_G4",
    "FIG3_G5",
    "FIG3_G6",
    "SetCoverInstance",
    "GadgetLayout",
    "build_star",
    "build_path",
    "build_cycle",
    "build_clique",
    "build_figure_network",
    "dominating_set_to_set_cover",
    "set_cover_to_best_response_gadget",
]


def build_star(n, sponsor=CENTER):
    """Star on ``n`` nodes; the center (node 0) buys every edge."""
    if n < 2:
        raise ValueError(f"star needs at least 2 nodes, got {n}")
    if sponsor != CENTER:
        raise ValueError(f"unsupported sponsor {sponsor!r}")
    g = OwnedGraph(n)
    for leaf in range(1, n):
        g.add_edge(0, leaf)
    return g


def build_path(n):
    """Path on ``n`` nodes; node i buys the edge to node i + 1."""
    if n < 1:
        raise ValueError(f"path needs at least 1 node, got {n}")
    g = OwnedGraph(n)
    for i in range(n - 1):
        g.add_edge(i, i + 1)
    return g


def build_cycle(n):
    """Cycle on ``n`` nodes; node i buys the edge to node (i + 1) mod n."""
    if n < 3:
        raise ValueError(f"cycle needs at least 3 nodes, got {n}")
    g = OwnedGraph(n)
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


def build_clique(n):
    """Complete graph on ``n`` nodes; the lower-indexed endpoint buys."""
    if n < 2:
        raise ValueError(f"clique needs at least 2 nodes, got {n}")
    g = OwnedGraph(n)
    for a in range(n):
        for b in range(a + 1, n):
            g.add_edge(a, b)
    return g


def build_figure_network(name):
    """Load one of the packaged reference networks by name.

    Available names are listed in :data:`FIGURE_NAMES`.  Each network is
    shipped as a graph text file and parsed on demand, so ownership in
    the returned graph matches the file byte for byte.
    """
    from degprice.textio import parse_graph_file

    if name not in FIGURE_NAMES:
        raise ValueError(f"unknown figure network {name!r}, expected one of {FIGURE_NAMES}")
    path = resources.files("degprice").joinpath("data", f"{name}.graph")
    return parse_graph_file(path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class SetCoverInstance:
    """Set cover with uniform set size ``q`` over ``range(universe_size)``."""

    universe_size: int
    sets: tuple
    q: int

    def __post_init__(self):
        if self.universe_size < 1:
            raise ValueError(f"universe must be nonempty, got {self.universe_size}")
        if self.q < 1:
            raise ValueError(f"set size must be at least 1, got {self.q}")
        if not self.sets:
            raise ValueError("instance needs at least one set")
        canonical = []
        for s in self.sets:
            elems = tuple(sorted(s))
            if len(elems) != self.q or len(set(elems)) != self.q:
                raise ValueError(f"set {s!r} does not have exactly q={self.q} distinct elements")
            for e in elems:
                if not 0 <= e < self.universe_size:
                    raise ValueError(f"element {e} outside universe 0..{self.universe_size - 1}")
            canonical.append(elems)
        object.__setattr__(self, "sets", tuple(canonical))

    @property
    def num_sets(self):
        return len(self.sets)

    def covered(self, chosen):
        out = set()
        for j in chosen:
            out.update(self.sets[j])
        return out

    def is_cover(self, chosen):
        return len(self.covered(chosen)) == self.universe_size


def dominating_set_to_set_cover(g, q):
    """Closed-neighborhood instance of a q-regular graph.

    Dominating sets of the graph correspond one-to-one with covers: set
    j is the closed neighborhood of node j, so it has q + 1 elements.
    """
    for v in range(g.n):
        if degree(g, v) != q:
            raise ValueError(f"graph is not {q}-regular: node {v} has degree {degree(g, v)}")
    sets = tuple(tuple(sorted(g.neighbors(v) | {v})) for v in range(g.n))
    return SetCoverInstance(universe_size=g.n, sets=sets, q=q + 1)


@dataclass(frozen=True)
class GadgetLayout:
    """Node bookkeeping for the set-cover best-response gadget.

    ``role_map`` labels each node as agent / hub / set / element /
    padding; ``index_map`` gives the instance index behind the label
    (set nodes map to their set index, padding nodes to an
    ``(element, copy)`` pair).
    """

    graph: OwnedGraph
    instance: SetCoverInstance
    agent: int
    hub: int
    set_nodes: tuple
    element_nodes: tuple
    padding_nodes: tuple
    role_map: dict = field(repr=False)
    index_map: dict = field(repr=False)

    def cover_from_targets(self, targets):
        """Translate a strategy for the agent into chosen set indices."""
        chosen = []
        for t in sorted(targets):
            if self.role_map.get(t) != "set":
                raise ValueError(f"target {t} is not a set node")
            chosen.append(self.index_map[t])
        return tuple(chosen)

    def as_dict(self):
        return {
            "agent": self.agent,
            "hub": self.hub,
            "set_nodes": list(self.set_nodes),
            "element_nodes": list(self.element_nodes),
            "nodes": self.graph.n,
            "q": self.instance.q,
        }


def set_cover_to_best_response_gadget(inst):
    """Build the network whose 2-local best response for the agent node
    encodes a minimum cover of ``inst``.

    Requires q >= 4 so that covering an element (q + 2 nodes pulled one
    hop closer) always beats its price (q per set) with room to spare,
    and every element must appear in some set or the network would be
    disconnected.
    """
    if inst.q < 4:
        raise ValueError(f"gadget requires set size q >= 4, got q={inst.q}")
    missing = sorted(set(range(inst.universe_size)) - inst.covered(range(inst.num_sets)))
    if missing:
        raise InfeasibleInstanceError(
            f"elements {missing} appear in no set; the gadget would be disconnected"
        )

    n, q, num_sets = inst.universe_size, inst.q, inst.num_sets
    pads_per_element = q + 1
    element_nodes = tuple(range(n))
    pad_base = n
    set_base = pad_base + n * pads_per_element
    hub = set_base + num_sets
    agent = hub + 1
    g = OwnedGraph(agent + 1)

    role_map = {}
    index_map = {}
    padding_nodes = []
    for i in element_nodes:
        role_map[i] = "element"
        index_map[i] = i
        for r in range(pads_per_element):
            p = pad_base + i * pads_per_element + r
            role_map[p] = "padding"
            index_map[p] = (i, r)
            padding_nodes.append(p)
            g.add_edge(i, p)
    set_nodes = tuple(set_base + j for j in range(num_sets))
    for j, a in enumerate(set_nodes):
        role_map[a] = "set"
        index_map[a] = j
        for i in inst.sets[j]:
            g.add_edge(i, a)
        g.add_edge(a, hub)
    role_map[hub] = "hub"
    index_map[hub] = 0
    role_map[agent] = "agent"
    index_map[agent] = 0
    g.add_edge(hub, agent)

    dist = bfs_distances(g, agent)
    for v in range(g.n):
        if dist[v] == 2 and degree(g, v) != q + 1:
            raise AssertionError(f"node {v} at distance 2 has degree {degree(g, v)} != q+1")
        if dist[v] == 3 and degree(g, v) < q + 2:
            raise AssertionError(f"node {v} at distance 3 has degree {degree(g, v)} < q+2")

    return GadgetLayout(
        graph=g,
        instance=inst,
        agent=agent,
        hub=hub,
        set_nodes=set_nodes,
        element_nodes=element_nodes,
        padding_nodes=tuple(padding_nodes),
        role_map=role_map,
        index_map=index_map,
    )
