"""Acceptance criteria, one test per claim.

Each test is one externally meaningful property of the game model:
equilibrium families, optimum shape, diameter bounds, price-of-anarchy
behavior, convergence speeds, and the hardness reduction.  Numeric
tolerances are pinned constants chosen before the assertions were first
run; exhaustive claims are bounded by the documented enumeration caps.
"""

import math
import random

import numpy as np
import pytest

from degprice.constructions import (
    SetCoverInstance,
    build_clique,
    build_figure_network,
    build_path,
    build_star,
    dominating_set_to_set_cover,
    set_cover_to_best_response_gadget,
)
from degprice.costs import GameConfig, rho, social_cost
from degprice.dynamics import (
    DEG2AOG_2NE,
    DEGAOG_NE,
    ActivationScheme,
    adversarial_schedule,
    run_dynamics,
    scripted_linear_sequences,
)
from degprice.graph import OwnedGraph, diameter
from degprice.moves import SwapEdge, best_response_exact, verify_equilibrium
from degprice.oracle import best_reachable, min_dominating_set, min_set_cover, optimal_social_cost, reachable_closure

ALL_CONFIGS = [
    GameConfig(variant="ncg"),
    GameConfig(variant="ncg", locality_k=2),
    GameConfig(variant="aog"),
    GameConfig(variant="aog", locality_k=2),
]


def _r_squared(xs, ys, deg):
    coeffs = np.polyfit(xs, ys, deg)
    fitted = np.polyval(coeffs, xs)
    ys = np.asarray(ys, dtype=float)
    ss_res = float(((ys - fitted) ** 2).sum())
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    return coeffs, 1.0 - ss_res / ss_tot


def test_criterion_01_center_stars_are_equilibria_everywhere():
    """Center-sponsored stars survive exact scrutiny in all four games."""
    for n in range(3, 11):
        g = build_star(n)
        for cfg in ALL_CONFIGS:
            rep = verify_equilibrium(g, cfg, level="exact")
            assert rep.is_equilibrium, (n, cfg.describe())


def test_criterion_02_social_optimum_is_a_star():
    for n in range(2, 7):
        cost, witness = optimal_social_cost(n, GameConfig())
        assert cost == 2 * (n - 1) ** 2
        assert cost == 2 * n * (n - 1) - 2 * (n - 1)
        degrees = sorted(len(witness.neighbors(v)) for v in range(n))
        assert degrees == [1] * (n - 1) + [n - 1]


def test_criterion_03_unrestricted_equilibria_have_diameter_at_most_3(census):
    for n in (3, 4, 5):
        assert census.get("ncg", None, n).eq_diameter_max <= 3
    # the bound is met with equality away from the exhaustive range
    g = build_figure_network("fig2b")
    assert diameter(g) == 3


def test_criterion_04_2local_equilibria_obey_the_root_bound(census):
    def bound(n):
        return (2.0 / 3.0) * (1.0 + math.sqrt(9 * n + 19))

    for variant in ("ncg", "aog"):
        for n in (3, 4, 5):
            assert census.get(variant, 2, n).eq_diameter_max < bound(n)
    assert diameter(build_figure_network("fig2c")) < bound(14)
    assert diameter(build_figure_network("fig2d")) < bound(14)


def test_criterion_05_price_of_stability_is_one(census):
    for variant in ("ncg", "aog"):
        for k in (None, 2):
            for n in (3, 4, 5):
                s = census.get(variant, k, n)
                assert s.pos == 1
                assert s.best_eq_cost == s.opt_cost


def test_criterion_06_cliques_drive_addonly_anarchy(census):
    for n in range(3, 9):
        rep = verify_equilibrium(build_clique(n), GameConfig(variant="aog"), level="exact")
        assert rep.is_equilibrium, n
    for n in (4, 5):
        s = census.get("aog", None, n)
        assert s.worst_eq_cost == social_cost(build_clique(n), GameConfig(variant="aog"))
    ratios = [census.get("aog", None, n).poa for n in (3, 4, 5)]
    assert ratios[0] < ratios[1] < ratios[2]


def test_criterion_07_swap_chain_cycles_forever():
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
    assert trace.outcome == "cycle-detected"
    assert trace.final == g1
    deltas = [(r.cost_before, r.cost_after) for r in trace.steps]
    assert deltas == [(24, 23), (20, 19), (23, 22)] * 2


def test_criterion_08_adversarial_schedules_grow_quadratically():
    cfg2 = GameConfig(variant="aog", locality_k=2)
    sizes = (20, 30, 40, 60)
    counts = []
    for n in sizes:
        scheme = adversarial_schedule(n, cfg2)
        trace = run_dynamics(build_path(n), cfg2, scheme)
        assert trace.outcome == "converged", n
        assert len(trace.steps) == len(scheme.schedule)
        rep = verify_equilibrium(trace.final, cfg2, level="single-move")
        assert rep.is_equilibrium
        counts.append(len(trace.steps))
    assert counts == [37, 92, 172, 407]
    coeffs, r2 = _r_squared(sizes, counts, deg=2)
    assert coeffs[0] > 0
    assert r2 >= 0.99

    glob = GameConfig(variant="aog")
    scheme = adversarial_schedule(20, glob)
    trace = run_dynamics(build_path(20), glob, scheme)
    assert len(trace.steps) == len(scheme.schedule)
    assert trace.metadata["script_exhausted"] is True
    assert trace.final_diameter == 3


def test_criterion_09_round_robin_converges_in_near_linear_activations():
    cfg = GameConfig(variant="aog", locality_k=2)
    ratios = []
    for n in (50, 100, 200, 400):
        trace = run_dynamics(build_path(n), cfg, ActivationScheme.round_robin())
        assert trace.outcome == "converged", n
        assert trace.final_diameter <= 6
        ratios.append(trace.activations / (n * math.log(n)))
    assert max(ratios) / min(ratios) <= 3.0


def test_criterion_10_random_activation_converges_within_cubic_budget():
    cfg = GameConfig()
    means = []
    for n in (10, 15, 20):
        total = 0
        for seed in range(20):
            trace = run_dynamics(
                build_path(n), cfg, ActivationScheme.uniform_random(seed=seed)
            )
            assert trace.outcome == "converged", (n, seed)
            total += trace.activations
        mean = total / 20
        assert mean <= 0.1 * n**3
        means.append(mean)
    assert means[0] < means[1] < means[2]


def test_criterion_11_linear_schedules_end_in_equilibria():
    runs = (
        (DEGAOG_NE, GameConfig(variant="aog"), (13, 16, 19, 22, 25),
         lambda n: n - 2 + (n - 10) // 3, {13, 16, 19}),
        (DEG2AOG_2NE, GameConfig(variant="aog", locality_k=2), (12, 16, 20, 24, 30),
         lambda n: n - 3, {12, 16, 20}),
    )
    for which, cfg, sizes, count_of, exact_sizes in runs:
        counts = []
        for n in sizes:
            trace = run_dynamics(build_path(n), cfg, scripted_linear_sequences(n, which))
            assert trace.outcome == "converged", (which, n)
            assert len(trace.steps) == count_of(n)
            assert verify_equilibrium(trace.final, cfg, level="single-move").is_equilibrium
            if n in exact_sizes:  # kept inside the exact-search candidate cap
                assert verify_equilibrium(trace.final, cfg, level="exact").is_equilibrium
            counts.append(len(trace.steps))
        coeffs, _ = _r_squared(sizes, counts, deg=2)
        assert abs(coeffs[0]) <= 0.01, (which, coeffs)


def _random_regular(n, d, rng):
    while True:
        stubs = [v for v in range(n) for _ in range(d)]
        rng.shuffle(stubs)
        pairs = list(zip(stubs[::2], stubs[1::2]))
        simple = all(a != b for a, b in pairs)
        simple = simple and len({tuple(sorted(p)) for p in pairs}) == len(pairs)
        if simple:
            g = OwnedGraph(n)
            for a, b in pairs:
                g.add_edge(min(a, b), max(a, b))
            return g


def test_criterion_12_best_response_encodes_minimum_set_cover():
    cfg = GameConfig(variant="aog", locality_k=2)
    rng = random.Random(42)
    solved = 0
    while solved < 20:
        q = rng.choice((4, 5))
        n = rng.randint(q, 10)
        sets = tuple(
            tuple(sorted(rng.sample(range(n), q))) for _ in range(rng.randint(1, 5))
        )
        if set().union(*map(set, sets)) != set(range(n)):
            continue  # resample until every element is coverable
        inst = SetCoverInstance(universe_size=n, sets=sets, q=q)
        layout = set_cover_to_best_response_gadget(inst)
        strategy, _ = best_response_exact(layout.graph, layout.agent, cfg)
        chosen = layout.cover_from_targets(strategy)
        assert inst.is_cover(chosen)
        assert len(chosen) == min_set_cover(inst)[0]
        solved += 1

    fixed = [
        OwnedGraph(5, [(i, (i + 1) % 5) for i in range(5)]),
        build_clique(4),
    ]
    petersen = OwnedGraph(10)
    for i in range(5):
        petersen.add_edge(i, (i + 1) % 5)
        petersen.add_edge(i, i + 5)
        petersen.add_edge(5 + i, 5 + (i + 2) % 5)
    fixed.append(petersen)
    reg_rng = random.Random(7)
    fixed.extend(_random_regular(n, 3, reg_rng) for n in (6, 8, 10))
    for g in fixed:
        d = len(g.neighbors(0))
        inst = dominating_set_to_set_cover(g, d)
        assert min_set_cover(inst)[0] == min_dominating_set(g)[0]


def test_criterion_13_reachable_quality_stays_logarithmic():
    cfg = GameConfig(variant="aog")
    for n, worst_rho in ((5, (39, 35)), (6, (13, 11))):
        best, _ = best_reachable(build_path(n), cfg)
        terminals = [g for g, is_t in reachable_closure(build_path(n), cfg) if is_t]
        values = [rho(g, best, cfg) for g in terminals]
        assert min(values) == 1
        assert max(values) * worst_rho[1] == worst_rho[0]  # exact fraction

    cfg2 = GameConfig(variant="aog", locality_k=2)
    scaled = []
    for n in (50, 100, 200):
        trace = run_dynamics(build_path(n), cfg2, ActivationScheme.round_robin())
        assert trace.outcome == "converged"
        per_pair = trace.final_social_cost / (n * (n - 1))
        scaled.append(per_pair / math.log(n))
    assert max(scaled) / min(scaled) <= 3.0
