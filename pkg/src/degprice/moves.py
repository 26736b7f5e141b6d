"""Moves, best responses, and equilibrium verification.

A deviation never mutates the input graph: candidate strategies are
priced by a BFS that overlays the deviator's new edge set on the stale
adjacency of everyone else.  Only edges incident to the deviator change,
and those are exactly the edges the overlay controls, so the stale rest
is safe to reuse.
"""

from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from degprice._kernels import UNREACHABLE
from degprice.costs import agent_cost, edge_price
from degprice.errors import CandidateCapExceeded
from degprice.graph import bfs_distances

EXACT = "exact"
SINGLE_MOVE = "single-move"

CANDIDATE_CAP = 20

K_DELETION_NOTE = (
    "locality restricts new targets only; deletions and the removal half "
    "of swaps may touch any owned edge"
)
SINGLE_MOVE_NOTE = "single-move check is a necessary condition, not sufficient"

__all__ = [
    "EXACT",
    "SINGLE_MOVE",
    "CANDIDATE_CAP",
    "AddEdge",
    "DeleteEdge",
    "SwapEdge",
    "ReplaceStrategy",
    "MoveRecord",
    "EquilibriumReport",
    "candidate_targets",
    "evaluate_deviation",
    "strategy_after",
    "apply_move",
    "enumerate_single_moves",
    "best_response_exact",
    "verify_equilibrium",
]


@dataclass(frozen=True)
class AddEdge:
    target: int

    def as_dict(self):
        return {"type": "add", "target": self.target}


@dataclass(frozen=True)
class DeleteEdge:
    target: int

    def as_dict(self):
        return {"type": "delete", "target": self.target}


@dataclass(frozen=True)
class SwapEdge:
    old_target: int
    new_target: int

    def as_dict(self):
        return {"type": "swap", "old_target": self.old_target, "new_target": self.new_target}


@dataclass(frozen=True)
class ReplaceStrategy:
    new_targets: tuple

    def as_dict(self):
        return {"type": "replace", "new_targets": list(self.new_targets)}


@dataclass(frozen=True)
class MoveRecord:
    """One agent's deviation with its exact before/after cost."""

    agent: int
    kind: object
    cost_before: object
    cost_after: object

    @property
    def improving(self):
        return self.cost_after < self.cost_before

    def as_dict(self):
        def plain(x):
            return int(x) if x == int(x) else float(x)

        return {
            "agent": self.agent,
            "kind": self.kind.as_dict(),
            "before": plain(self.cost_before),
            "after": plain(self.cost_after),
        }


@dataclass(frozen=True)
class EquilibriumReport:
    """Outcome of an equilibrium check, with a deviation witness if any."""

    is_equilibrium: bool
    witness: MoveRecord | None
    check_level: str
    notes: tuple = ()

    def as_dict(self):
        return {
            "is_equilibrium": self.is_equilibrium,
            "witness": None if self.witness is None else self.witness.as_dict(),
            "check_level": self.check_level,
            "notes": list(self.notes),
        }


def candidate_targets(g, u, cfg):
    """Nodes u could buy a new edge to under cfg's locality radius."""
    g._check_node(u)
    if cfg.locality_k is None:
        return {v for v in range(g.n) if v != u and not g.has_edge(u, v)}
    row = bfs_distances(g, u)
    k = cfg.locality_k
    return {
        v
        for v in range(g.n)
        if v != u and not g.has_edge(u, v) and row.dist[v] <= k
    }


def evaluate_deviation(g, u, new_targets, cfg):
    """Total cost of u if u switched to new_targets, everyone else fixed.

    Returns UNREACHABLE when the deviation leaves u disconnected.
    """
    new_targets = set(new_targets)
    old_targets = g._targets[u]
    incoming = g._adj[u] - old_targets
    clash = new_targets & incoming
    if clash:
        raise ValueError(f"targets {sorted(clash)} already own edges to {u}")

    edge = 0
    for v in new_targets:
        d = len(g._adj[v])
        if v not in old_targets:
            d += 1
        edge = edge + edge_price(cfg, d)

    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[u] = 0
    queue = deque()
    for v in new_targets | incoming:
        dist[v] = 1
        queue.append(v)
    while queue:
        x = queue.popleft()
        dx = int(dist[x])
        for y in g._adj[x]:
            if dist[y] == UNREACHABLE:
                dist[y] = dx + 1
                queue.append(y)
    if int(dist.max()) >= UNREACHABLE:
        return UNREACHABLE
    return edge + int(dist.sum())


def strategy_after(g, u, kind):
    """Target set u would hold after playing the given move kind."""
    current = g.targets(u)
    if isinstance(kind, AddEdge):
        if g.has_edge(u, kind.target):
            raise ValueError(f"edge {{{u},{kind.target}}} already present")
        return current | {kind.target}
    if isinstance(kind, DeleteEdge):
        if kind.target not in current:
            raise ValueError(f"agent {u} owns no edge to {kind.target}")
        return current - {kind.target}
    if isinstance(kind, SwapEdge):
        if kind.old_target not in current:
            raise ValueError(f"agent {u} owns no edge to {kind.old_target}")
        if g.has_edge(u, kind.new_target) and kind.new_target != kind.old_target:
            raise ValueError(f"edge {{{u},{kind.new_target}}} already present")
        return current - {kind.old_target} | {kind.new_target}
    if isinstance(kind, ReplaceStrategy):
        return set(kind.new_targets)
    raise TypeError(f"unknown move kind {kind!r}")


def apply_move(g, u, kind):
    """Mutate g by playing the move."""
    if isinstance(kind, AddEdge):
        g.add_edge(u, kind.target)
    elif isinstance(kind, DeleteEdge):
        g.remove_edge(u, kind.target)
    elif isinstance(kind, SwapEdge):
        g.remove_edge(u, kind.old_target)
        g.add_edge(u, kind.new_target)
    elif isinstance(kind, ReplaceStrategy):
        g.replace_strategy(u, kind.new_targets)
    else:
        raise TypeError(f"unknown move kind {kind!r}")


def enumerate_single_moves(g, u, cfg):
    """All elementary deviations of u with exact before/after costs.

    Additions go to candidate targets; deletions and swaps exist in the
    NCG variants only.  Disconnecting moves appear with an UNREACHABLE
    after-cost rather than being filtered.
    """
    before = agent_cost(g, u, cfg).total
    cands = sorted(candidate_targets(g, u, cfg))
    moves = []

    def record(kind):
        after = evaluate_deviation(g, u, strategy_after(g, u, kind), cfg)
        moves.append(MoveRecord(agent=u, kind=kind, cost_before=before, cost_after=after))

    for v in cands:
        record(AddEdge(v))
    if not cfg.add_only:
        owned = sorted(g.targets(u))
        for v in owned:
            record(DeleteEdge(v))
        for old in owned:
            for new in cands:
                record(SwapEdge(old, new))
    return moves


def best_response_exact(g, u, cfg, cap=CANDIDATE_CAP):
    """Cost-minimizing strategy for u by exhaustive subset search.

    NCG: any subset of candidates plus current targets.  AOG: current
    targets plus any subset of candidates.  Ties break toward fewer
    edges, then the lexicographically smallest target set.  Raises
    CandidateCapExceeded when the variable universe tops the cap.
    """
    cands = candidate_targets(g, u, cfg)
    current = g.targets(u)
    if cfg.add_only:
        variable = sorted(cands)
        base = current
    else:
        variable = sorted(cands | current)
        base = set()
    if len(variable) > cap:
        raise CandidateCapExceeded(u, len(variable), cap)

    best_key = None
    best = None
    for r in range(len(variable) + 1):
        for picked in combinations(variable, r):
            strategy = base | set(picked)
            cost = evaluate_deviation(g, u, strategy, cfg)
            key = (cost, len(strategy), tuple(sorted(strategy)))
            if best_key is None or key < best_key:
                best_key = key
                best = (strategy, cost)
    return best


def _classify_deviation(current, strategy):
    """Render a strategy change as the smallest move kind that realizes it."""
    added = sorted(strategy - current)
    removed = sorted(current - strategy)
    if len(added) == 1 and not removed:
        return AddEdge(added[0])
    if len(removed) == 1 and not added:
        return DeleteEdge(removed[0])
    if len(added) == 1 and len(removed) == 1:
        return SwapEdge(removed[0], added[0])
    return ReplaceStrategy(tuple(sorted(strategy)))


def _notes_for(cfg, level):
    notes = []
    if level == SINGLE_MOVE:
        notes.append(SINGLE_MOVE_NOTE)
    if cfg.locality_k is not None and not cfg.add_only:
        notes.append(K_DELETION_NOTE)
    return tuple(notes)


def verify_equilibrium(g, cfg, level=EXACT, cap=CANDIDATE_CAP):
    """Check whether no agent can strictly improve.

    EXACT searches every allowed strategy per agent (cap permitting);
    SINGLE_MOVE only scans elementary moves and says so in its notes.
    """
    notes = _notes_for(cfg, level)
    if level == SINGLE_MOVE:
        for u in range(g.n):
            for mv in enumerate_single_moves(g, u, cfg):
                if mv.improving:
                    return EquilibriumReport(False, mv, level, notes)
        return EquilibriumReport(True, None, level, notes)
    if level != EXACT:
        raise ValueError(f"unknown check level {level!r}")
    for u in range(g.n):
        before = agent_cost(g, u, cfg).total
        strategy, cost = best_response_exact(g, u, cfg, cap=cap)
        if cost < before:
            kind = _classify_deviation(g.targets(u), strategy)
            witness = MoveRecord(agent=u, kind=kind, cost_before=before, cost_after=cost)
            return EquilibriumReport(False, witness, level, notes)
    return EquilibriumReport(True, None, level, notes)
