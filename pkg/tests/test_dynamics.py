"""Improving-response dynamics: schedules, traces, replay validation."""

import json

import pytest

from degprice.constructions import build_figure_network
from degprice.costs import GameConfig, UNREACHABLE
from degprice.dynamics import (
    CONVERGED,
    CYCLE_DETECTED,
    FULL_BEST_RESPONSE,
    STEP_LIMIT,
    ActivationScheme,
    canonical_state_hash,
    run_dynamics,
)
from degprice.errors import ScheduleReplayError
from degprice.graph import OwnedGraph
from degprice.moves import AddEdge, SwapEdge, verify_equilibrium


def path(n):
    return OwnedGraph(n, [(i, i + 1) for i in range(n - 1)])


AOG2 = GameConfig(variant="aog", locality_k=2)


def test_scheme_validation():
    with pytest.raises(ValueError, match="seed"):
        ActivationScheme(kind="uniform-random")
    with pytest.raises(ValueError, match="policy"):
        ActivationScheme(kind="round-robin", move_policy="psychic")
    with pytest.raises(ValueError, match="nonempty"):
        ActivationScheme.scripted([])
    with pytest.raises(ValueError, match="unknown"):
        ActivationScheme(kind="lottery")
    with pytest.raises(ValueError, match="positive"):
        run_dynamics(path(3), AOG2, ActivationScheme.round_robin(), max_steps=0)


def test_stable_start_converges_without_moves():
    star = OwnedGraph(5, [(0, v) for v in range(1, 5)])
    trace = run_dynamics(star, GameConfig(), ActivationScheme.round_robin())
    assert trace.outcome == CONVERGED
    assert trace.steps == []
    assert trace.rounds == 1
    assert trace.activations == trace.rounds * star.n


def test_same_seed_reruns_are_identical():
    a = run_dynamics(path(6), AOG2, ActivationScheme.uniform_random(seed=0))
    b = run_dynamics(path(6), AOG2, ActivationScheme.uniform_random(seed=0))
    assert a.as_dict() == b.as_dict()
    assert a.outcome == CONVERGED
    # a converged uniform-random run must have reached single-move stability
    assert verify_equilibrium(a.final, AOG2, level="exact").is_equilibrium


def test_every_applied_step_improves_and_only_adds_in_aog():
    trace = run_dynamics(
        path(8), GameConfig(variant="aog"), ActivationScheme.uniform_random(seed=3)
    )
    assert trace.steps
    for s in trace.steps:
        assert s.improving
        assert isinstance(s.kind, AddEdge)
    # the initial graph is left untouched by the run
    assert trace.initial == path(8)


def test_round_robin_accounting_and_custom_order():
    trace = run_dynamics(
        path(4), GameConfig(), ActivationScheme.round_robin(move_policy=FULL_BEST_RESPONSE)
    )
    assert trace.outcome == CONVERGED
    assert (len(trace.steps), trace.activations, trace.rounds) == (1, 8, 2)
    assert trace.activations == trace.rounds * 4
    assert verify_equilibrium(trace.final, GameConfig(), level="exact").is_equilibrium
    # an order covering one never-improving agent converges after one wake-up
    lone = run_dynamics(
        path(4), GameConfig(variant="aog"), ActivationScheme.round_robin(order=(1,))
    )
    assert lone.outcome == CONVERGED
    assert (lone.activations, lone.rounds, lone.steps) == (1, 1, [])


def test_step_limit_counts_activations():
    trace = run_dynamics(
        path(10), GameConfig(variant="aog"), ActivationScheme.round_robin(), max_steps=3
    )
    assert trace.outcome == STEP_LIMIT
    assert trace.activations == 3


def test_engine_selection_is_reported():
    rr = ActivationScheme.round_robin()
    assert run_dynamics(path(4), AOG2, rr).metadata["engine"] == "AddOnlyEngine"
    assert run_dynamics(path(4), GameConfig(), rr).metadata["engine"] == "GenericEngine"


def test_unfixable_disconnection_serializes_as_unreachable():
    """A node beyond every locality radius stays lost; outputs must say so."""
    g = OwnedGraph(3, [(0, 1)])
    trace = run_dynamics(g, AOG2, ActivationScheme.round_robin())
    assert trace.outcome == CONVERGED
    assert trace.final_social_cost == UNREACHABLE
    assert trace.csv_row() == (3, 3, 1, "unreachable", "unreachable")
    payload = json.loads(json.dumps(trace.as_dict()))
    assert payload["final_social_cost"] == "unreachable"
    assert payload["steps"] == []


def test_scripted_replay_rejects_non_improving_step():
    scheme = ActivationScheme.scripted([(0, AddEdge(2))])
    with pytest.raises(ScheduleReplayError, match="step 0"):
        run_dynamics(path(3), GameConfig(variant="aog"), scheme)


def test_scripted_exhaustion_reports_stability_honestly():
    # a script ending on a stable graph is a convergence ...
    done = run_dynamics(
        path(4), GameConfig(variant="aog"), ActivationScheme.scripted([(0, AddEdge(3))])
    )
    assert done.outcome == CONVERGED
    assert done.metadata["final_single_move_stable"] is True
    # ... one stopping early is not, even though every move replayed fine
    short = run_dynamics(
        path(6), GameConfig(variant="aog"), ActivationScheme.scripted([(0, AddEdge(2))])
    )
    assert short.outcome == STEP_LIMIT
    assert short.metadata["script_exhausted"] is True
    assert short.metadata["final_single_move_stable"] is False
    assert len(short.steps) == 1


def test_swap_cycle_is_detected_and_returns_home():
    g1 = build_figure_network("fig3-g1")
    swaps = [
        (4, SwapEdge(7, 8)),
        (1, SwapEdge(8, 7)),
        (9, SwapEdge(8, 7)),
        (4, SwapEdge(8, 7)),
        (1, SwapEdge(7, 8)),
        (9, SwapEdge(7, 8)),
    ]
    trace = run_dynamics(g1, GameConfig(), ActivationScheme.scripted(swaps))
    assert trace.outcome == CYCLE_DETECTED
    assert len(trace.steps) == 6
    assert trace.final == g1
    assert canonical_state_hash(trace.final) == canonical_state_hash(g1)


def test_state_hash_is_ownership_sensitive():
    a = OwnedGraph(2, [(0, 1)])
    b = OwnedGraph(2, [(1, 0)])
    assert canonical_state_hash(a) == canonical_state_hash(a.copy())
    assert canonical_state_hash(a) != canonical_state_hash(b)
