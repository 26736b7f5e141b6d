"""Improving-response dynamics: activation schemes, replay, traces.

The engine activates one agent at a time.  An activation either applies
that agent's move (per the scheme's move policy) or records that the
agent is currently stuck.  ``max_steps`` caps activations, not applied
moves; convergence statistics are reported in activations because that
is the unit the random process is naturally measured in.

Add-only runs with single-edge policies and integer pricing go through
an incremental engine that maintains the full distance matrix (array
kernels); everything else falls back to per-move graph search.
"""

import math
import random
from dataclasses import dataclass, field

import numpy as np

from degprice._kernels import (
    UNREACHABLE,
    addition_row_sums,
    apsp,
    apsp_update_add,
    row_sums_with_sentinel,
    BACKEND,
)
from degprice.costs import agent_cost, social_cost
from degprice.errors import ScheduleReplayError
from degprice.graph import diameter
from degprice.moves import (
    AddEdge,
    MoveRecord,
    _classify_deviation,
    apply_move,
    best_response_exact,
    candidate_targets,
    enumerate_single_moves,
    evaluate_deviation,
    strategy_after,
)

UNIFORM_RANDOM = "uniform-random"
ROUND_ROBIN = "round-robin"
SCRIPTED = "scripted"

BEST_SINGLE_EDGE = "best-single-edge"
FIRST_IMPROVING_SINGLE_MOVE = "first-improving-single-move"
FULL_BEST_RESPONSE = "full-best-response"

CONVERGED = "converged"
CYCLE_DETECTED = "cycle-detected"
STEP_LIMIT = "step-limit"

DEGAOG_NE = "degaog-ne"
DEG2AOG_2NE = "deg2aog-2ne"

_POLICIES = (BEST_SINGLE_EDGE, FIRST_IMPROVING_SINGLE_MOVE, FULL_BEST_RESPONSE)

__all__ = [
    "UNIFORM_RANDOM",
    "ROUND_ROBIN",
    "SCRIPTED",
    "BEST_SINGLE_EDGE",
    "FIRST_IMPROVING_SINGLE_MOVE",
    "FULL_BEST_RESPONSE",
    "CONVERGED",
    "CYCLE_DETECTED",
    "STEP_LIMIT",
    "DEGAOG_NE",
    "DEG2AOG_2NE",
    "ActivationScheme",
    "DynamicsTrace",
    "run_dynamics",
    "adversarial_schedule",
    "scripted_linear_sequences",
    "canonical_state_hash",
]


@dataclass(frozen=True)
class ActivationScheme:
    """Who moves when, and what counts as their move."""

    kind: str
    move_policy: str | None = None
    seed: int | None = None
    order: tuple | None = None
    schedule: tuple | None = None

    def __post_init__(self):
        if self.kind == UNIFORM_RANDOM:
            if self.seed is None or self.move_policy not in _POLICIES:
                raise ValueError("uniform-random needs a seed and a move policy")
        elif self.kind == ROUND_ROBIN:
            if self.move_policy not in _POLICIES:
                raise ValueError("round-robin needs a move policy")
        elif self.kind == SCRIPTED:
            if not self.schedule:
                raise ValueError("scripted scheme needs a nonempty schedule")
        else:
            raise ValueError(f"unknown activation kind {self.kind!r}")

    @classmethod
    def uniform_random(cls, seed, move_policy=FIRST_IMPROVING_SINGLE_MOVE):
        return cls(kind=UNIFORM_RANDOM, move_policy=move_policy, seed=seed)

    @classmethod
    def round_robin(cls, move_policy=BEST_SINGLE_EDGE, order=None):
        order = None if order is None else tuple(order)
        return cls(kind=ROUND_ROBIN, move_policy=move_policy, order=order)

    @classmethod
    def scripted(cls, schedule):
        return cls(kind=SCRIPTED, schedule=tuple(schedule))

    def describe(self):
        if self.kind == UNIFORM_RANDOM:
            return f"{self.kind}(seed={self.seed}) / {self.move_policy}"
        if self.kind == ROUND_ROBIN:
            return f"{self.kind} / {self.move_policy}"
        return f"{self.kind}({len(self.schedule)} moves)"


@dataclass
class DynamicsTrace:
    """Full record of one run: applied moves plus summary statistics.

    ``steps`` holds applied moves only; ``activations`` also counts
    agent wake-ups that found nothing to do.  ``rounds`` is the number
    of completed sweeps (for uniform-random: activations divided by n).
    """

    initial: object
    steps: list
    outcome: str
    rounds: int
    final_social_cost: object
    final_diameter: int
    final: object
    activations: int
    metadata: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "initial": _graph_dict(self.initial),
            "steps": [s.as_dict() for s in self.steps],
            "outcome": self.outcome,
            "rounds": self.rounds,
            "final_social_cost": _cost_value(self.final_social_cost),
            "final_diameter": _cost_value(self.final_diameter),
            "final": _graph_dict(self.final),
            "activations": self.activations,
            "metadata": self.metadata,
        }

    def csv_row(self):
        """(n, steps, rounds, diameter, social_cost): steps = activations."""
        return (
            self.initial.n,
            self.activations,
            self.rounds,
            _cost_value(self.final_diameter),
            _cost_value(self.final_social_cost),
        )


def _graph_dict(g):
    return {"n": g.n, "edges": [list(e) for e in sorted(g.owned_edges)]}


def _cost_value(x):
    if x >= UNREACHABLE:
        return "unreachable"
    return int(x) if x == int(x) else float(x)


def canonical_state_hash(g):
    """Hash covering ownership: equal states collide, reversed edges do not."""
    return hash(g.state_key())


class _GenericEngine:
    """Move search straight on the graph; works for every config."""

    def __init__(self, g0, cfg):
        self.graph = g0.copy()
        self.cfg = cfg

    def total(self, u):
        return agent_cost(self.graph, u, self.cfg).total

    def find_move(self, u, policy):
        g, cfg = self.graph, self.cfg
        if policy == FULL_BEST_RESPONSE:
            before = self.total(u)
            strategy, cost = best_response_exact(g, u, cfg)
            if cost < before:
                return _classify_deviation(g.targets(u), strategy), before, cost
            return None
        moves = enumerate_single_moves(g, u, cfg)
        if policy == BEST_SINGLE_EDGE:
            adds = [m for m in moves if isinstance(m.kind, AddEdge)]
            if not adds:
                return None
            best = min(adds, key=lambda m: (m.cost_after, m.kind.target))
            if best.improving:
                return best.kind, best.cost_before, best.cost_after
            return None
        if policy == FIRST_IMPROVING_SINGLE_MOVE:
            for m in moves:
                if m.improving:
                    return m.kind, m.cost_before, m.cost_after
            return None
        raise ValueError(f"unknown move policy {policy!r}")

    def eval_move(self, u, kind):
        g, cfg = self.graph, self.cfg
        before = self.total(u)
        try:
            new_strategy = strategy_after(g, u, kind)
        except ValueError as exc:
            raise ScheduleReplayError(f"agent {u}: {exc}") from exc
        current = g.targets(u)
        if cfg.add_only and current - new_strategy:
            raise ScheduleReplayError(f"agent {u}: add-only config cannot drop edges")
        added = new_strategy - current
        if added:
            allowed = candidate_targets(g, u, cfg)
            bad = added - allowed
            if bad:
                raise ScheduleReplayError(
                    f"agent {u}: targets {sorted(bad)} outside the allowed candidates"
                )
        after = evaluate_deviation(g, u, new_strategy, cfg)
        return before, after

    def apply(self, u, kind):
        apply_move(self.graph, u, kind)


class _AddOnlyEngine:
    """Incremental engine for add-only single-edge dynamics.

    Keeps the distance matrix current through unit-edge updates, so one
    activation is a couple of vectorized passes instead of a BFS per
    candidate.  Requires integer pricing.
    """

    def __init__(self, g0, cfg):
        self.graph = g0.copy()
        self.cfg = cfg
        self.n = g0.n
        self.adj = g0.adjacency_matrix()
        self.dist = apsp(self.adj)
        self.sums = row_sums_with_sentinel(self.dist)
        self.deg = self.adj.sum(axis=1).astype(np.int64)
        self.beta = int(cfg.price_beta)
        self.gamma = int(cfg.price_gamma)

    def _edge_spend(self, u):
        return sum(
            self.beta * int(self.deg[v]) + self.gamma for v in self.graph.targets(u)
        )

    def total(self, u):
        s = int(self.sums[u])
        if s >= UNREACHABLE:
            return UNREACHABLE
        return self._edge_spend(u) + s

    def _after_totals(self, u):
        new_sums = addition_row_sums(self.dist, u)
        prices = self.beta * (self.deg + 1) + self.gamma
        after = self._edge_spend(u) + prices + new_sums
        eligible = ~self.adj[u]
        eligible[u] = False
        if self.cfg.locality_k is not None:
            eligible = eligible & (self.dist[u] <= self.cfg.locality_k)
        return eligible, after

    def find_move(self, u, policy):
        cur = self.total(u)
        eligible, after = self._after_totals(u)
        if not eligible.any():
            return None
        if policy == BEST_SINGLE_EDGE:
            masked = np.where(eligible, after, np.iinfo(np.int64).max)
            v = int(masked.argmin())
            if int(masked[v]) < cur:
                return AddEdge(v), cur, int(masked[v])
            return None
        improving = np.flatnonzero(eligible & (after < cur))
        if improving.size:
            v = int(improving[0])
            return AddEdge(v), cur, int(after[v])
        return None

    def eval_move(self, u, kind):
        if not isinstance(kind, AddEdge):
            raise ScheduleReplayError(
                f"agent {u}: add-only engine got {type(kind).__name__}"
            )
        v = kind.target
        if v == u or self.adj[u, v]:
            raise ScheduleReplayError(f"agent {u}: edge to {v} invalid or present")
        k = self.cfg.locality_k
        if k is not None and int(self.dist[u, v]) > k:
            raise ScheduleReplayError(
                f"agent {u}: target {v} at distance {int(self.dist[u, v])} > k={k}"
            )
        eligible, after = self._after_totals(u)
        return self.total(u), int(after[v])

    def apply(self, u, kind):
        v = kind.target
        self.graph.add_edge(u, v)
        self.adj[u, v] = self.adj[v, u] = True
        self.deg[u] += 1
        self.deg[v] += 1
        apsp_update_add(self.dist, u, v)
        self.sums = row_sums_with_sentinel(self.dist)


def _make_engine(g0, cfg, scheme):
    integer_prices = isinstance(cfg.price_beta, int) and isinstance(cfg.price_gamma, int)
    single_edge = scheme.move_policy != FULL_BEST_RESPONSE
    if cfg.add_only and single_edge and integer_prices:
        return _AddOnlyEngine(g0, cfg)
    return _GenericEngine(g0, cfg)


def _remember(seen, g):
    """Record the state; True when this exact state was already seen."""
    bucket = seen.setdefault(canonical_state_hash(g), [])
    key = g.state_key()
    if key in bucket:
        return True
    bucket.append(key)
    return False


def _single_move_stable(engine):
    for u in range(engine.graph.n):
        if engine.find_move(u, FIRST_IMPROVING_SINGLE_MOVE) is not None:
            return False
    return True


def run_dynamics(g0, cfg, scheme, max_steps=100_000):
    """Run the dynamics until stability, a repeated state, or the cap.

    Every applied move is validated as strictly improving.  Scripted
    schedules that contain a non-improving or illegal move abort with
    ScheduleReplayError.  A scripted run whose schedule ends cleanly is
    CONVERGED when the final graph is single-move stable, STEP_LIMIT
    otherwise (noted in metadata).
    """
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    engine = _make_engine(g0, cfg, scheme)
    g = engine.graph
    n = g.n
    steps = []
    activations = 0
    rounds = 0
    outcome = None
    metadata = {
        "config": cfg.describe(),
        "scheme": scheme.describe(),
        "backend": BACKEND,
        "engine": type(engine).__name__.strip("_"),
    }
    if scheme.move_policy == FIRST_IMPROVING_SINGLE_MOVE:
        metadata["pick_rule"] = "additions scanned in ascending target id"
    seen = None
    if not cfg.add_only:
        seen = {}
        _remember(seen, g)

    def step_applied(agent, kind, before, after):
        engine.apply(agent, kind)
        steps.append(MoveRecord(agent=agent, kind=kind, cost_before=before, cost_after=after))
        if seen is not None and _remember(seen, g):
            return CYCLE_DETECTED
        return None

    if scheme.kind == SCRIPTED:
        exhausted = True
        for index, (agent, kind) in enumerate(scheme.schedule):
            if activations >= max_steps:
                outcome = STEP_LIMIT
                exhausted = False
                break
            activations += 1
            before, after = engine.eval_move(agent, kind)
            if not after < before:
                raise ScheduleReplayError(
                    f"schedule step {index} (agent {agent}, {kind}): "
                    f"cost {before} -> {after} is not strictly improving"
                )
            outcome = step_applied(agent, kind, before, after)
            if outcome:
                exhausted = False
                break
        if outcome is None and exhausted:
            stable = _single_move_stable(engine)
            metadata["script_exhausted"] = True
            metadata["final_single_move_stable"] = stable
            outcome = CONVERGED if stable else STEP_LIMIT
        rounds = activations // n

    elif scheme.kind == ROUND_ROBIN:
        order = scheme.order if scheme.order is not None else tuple(range(n))
        while outcome is None:
            moved = False
            for agent in order:
                if activations >= max_steps:
                    outcome = STEP_LIMIT
                    break
                activations += 1
                found = engine.find_move(agent, scheme.move_policy)
                if found is not None:
                    kind, before, after = found
                    moved = True
                    outcome = step_applied(agent, kind, before, after)
                    if outcome:
                        break
            else:
                rounds += 1
                if not moved:
                    outcome = CONVERGED

    elif scheme.kind == UNIFORM_RANDOM:
        rng = random.Random(scheme.seed)
        unknown = set(range(n))
        while outcome is None:
            if not unknown:
                outcome = CONVERGED
                break
            if activations >= max_steps:
                outcome = STEP_LIMIT
                break
            agent = rng.randrange(n)
            activations += 1
            found = engine.find_move(agent, scheme.move_policy)
            if found is not None:
                kind, before, after = found
                outcome = step_applied(agent, kind, before, after)
                unknown = set(range(n))
            else:
                unknown.discard(agent)
        rounds = activations // n

    final = engine.graph.copy()
    return DynamicsTrace(
        initial=g0.copy(),
        steps=steps,
        outcome=outcome,
        rounds=rounds,
        final_social_cost=social_cost(final, cfg),
        final_diameter=diameter(final),
        final=final,
        activations=activations,
        metadata=metadata,
    )


def adversarial_schedule(n, cfg):
    """Scripted quadratic-length schedule for add-only games on P_n.

    Phase one stacks shortcuts onto the first half of the path, phase
    two turns the node just left of the middle into a hub, then the far
    endpoint shortcuts its tail.  With locality 2 the script stops
    there; otherwise two tail phases bring the diameter down to 3.
    Every emitted move is strictly improving at replay time.
    """
    if not cfg.add_only:
        raise ValueError("the adversarial schedule is for add-only configs")
    if cfg.locality_k is not None and cfg.locality_k < 2:
        raise ValueError("the schedule buys at distance 2; needs k >= 2 or global")
    if n < 12:
        raise ValueError(f"schedule index arithmetic needs n >= 12, got {n}")
    half = math.ceil(n / 2)
    moves = []

    def buy(agent, target):
        # 1-based path positions to 0-based node ids
        moves.append((agent - 1, AddEdge(target - 1)))

    for i in range(1, half - 3 + 1):
        buy(i, i + 2)
        for j in range(i - 1, 0, -1):
            buy(j, i + 2)
    hub = half - 1
    for i in range(half + 1, n - 2 + 1):
        buy(hub, i)
    buy(n, n - 2)
    if cfg.locality_k != 2:
        buy(half, n - 1)
        i = half + 3
        while i <= n - 5:
            buy(n - 1, i)
            i += 3
    return ActivationScheme.scripted(moves)


def scripted_linear_sequences(n, which):
    """Linear-length scripted runs from P_n ending in an equilibrium.

    DEGAOG_NE (needs n = 3m+1): the first node buys edges to almost the
    whole path, then the far endpoint shortcuts every third node
    descending and finally the second node.  DEG2AOG_2NE: the same hub
    phase, then the far endpoint buys one shortcut; locality-2 legal
    throughout.
    """
    if n < 10:
        raise ValueError(f"linear sequences need n >= 10, got {n}")
    moves = []

    def buy(agent, target):
        moves.append((agent - 1, AddEdge(target - 1)))

    if which == DEGAOG_NE:
        if n % 3 != 1:
            raise ValueError(f"degaog-ne sequence needs n = 1 mod 3, got {n}")
        for i in range(3, n - 2 + 1):
            buy(1, i)
        j = n - 5
        while j >= 5:
            buy(n, j)
            j -= 3
        buy(n, 2)
    elif which == DEG2AOG_2NE:
        for i in range(3, n - 2 + 1):
            buy(1, i)
        buy(n, n - 2)
    else:
        raise ValueError(f"unknown sequence {which!r}")
    return ActivationScheme.scripted(moves)
