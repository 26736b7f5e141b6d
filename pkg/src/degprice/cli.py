"""Command-line front end.

Subcommands: construct, cost, best-response, verify, dynamics,
enumerate, reduce, preset.  JSON is the machine format; CSV exists for
plotting convergence curves; text is a short human summary.  Exit codes:
0 success, 1 assertion failure, 2 usage error, 3 resource cap exceeded.
"""

import argparse
import json
import pathlib
import sys

from degprice import constructions
from degprice import textio
from degprice.costs import GameConfig, agent_cost, social_cost
from degprice.dynamics import (
    ActivationScheme,
    BEST_SINGLE_EDGE,
    DEG2AOG_2NE,
    DEGAOG_NE,
    FIRST_IMPROVING_SINGLE_MOVE,
    FULL_BEST_RESPONSE,
    adversarial_schedule,
    run_dynamics,
    scripted_linear_sequences,
)
from degprice.errors import (
    DegpriceError,
    GraphFormatError,
    InfeasibleInstanceError,
    ResourceCapExceeded,
    ScheduleReplayError,
)
from degprice.graph import diameter
from degprice.moves import AddEdge, DeleteEdge, SwapEdge, best_response_exact, verify_equilibrium
from degprice.oracle import equilibrium_census, optimal_social_cost

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

POLICIES = (BEST_SINGLE_EDGE, FIRST_IMPROVING_SINGLE_MOVE, FULL_BEST_RESPONSE)


def _add_game_flags(p):
    p.add_argument("--game", choices=("ncg", "aog"), default="ncg")
    p.add_argument("--k", default="global", help="locality radius, integer or 'global'")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=-1.0)


def _add_out_flags(p, formats=("json", "text")):
    p.add_argument("--out", type=pathlib.Path, default=None)
    p.add_argument("--format", choices=formats, default=formats[0])


def _config_from(args):
    if args.k == "global":
        k = None
    else:
        try:
            k = int(args.k)
        except ValueError:
            raise ValueError(f"--k must be an integer or 'global', got {args.k!r}")
    def num(x):
        return int(x) if float(x).is_integer() else float(x)
    return GameConfig(
        variant=args.game, locality_k=k, price_beta=num(args.beta), price_gamma=num(args.gamma)
    )


def _emit(args, text):
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)


def _read_graph(path):
    return textio.parse_graph_file(pathlib.Path(path).read_text())


def _cmd_construct(args):
    name = args.family
    if name in ("star", "path", "cycle", "clique") and args.n is None:
        raise ValueError(f"construct {name} requires --n")
    if name == "star":
        g = constructions.build_star(args.n)
    elif name == "path":
        g = constructions.build_path(args.n)
    elif name == "cycle":
        g = constructions.build_cycle(args.n)
    elif name == "clique":
        g = constructions.build_clique(args.n)
    elif name in constructions.FIGURE_NAMES:
        g = constructions.build_figure_network(name)
    else:
        raise ValueError(f"unknown family {name!r}")
    _emit(args, textio.serialize_graph(g))
    return EXIT_OK


def _cmd_cost(args):
    g = _read_graph(args.graph)
    cfg = _config_from(args)
    data = {"config": cfg.describe(), "social_cost": social_cost(g, cfg)}
    if args.agent is not None:
        data["agent"] = args.agent
        data["cost"] = agent_cost(g, args.agent, cfg).as_dict()
    else:
        data["agents"] = [agent_cost(g, u, cfg).as_dict() for u in range(g.n)]
    if args.format == "text":
        lines = [f"social cost: {data['social_cost']}"]
        if args.agent is not None:
            lines.append(f"agent {args.agent}: {data['cost']}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, textio.to_json_text(data))
    return EXIT_OK


def _cmd_best_response(args):
    g = _read_graph(args.graph)
    cfg = _config_from(args)
    strategy, cost = best_response_exact(g, args.agent, cfg)
    current = agent_cost(g, args.agent, cfg).total
    data = {
        "config": cfg.describe(),
        "agent": args.agent,
        "current_cost": current,
        "best_cost": cost,
        "best_strategy": sorted(strategy),
        "improves": cost < current,
    }
    _emit(args, textio.to_json_text(data))
    return EXIT_OK


def _cmd_verify(args):
    g = _read_graph(args.graph)
    cfg = _config_from(args)
    report = verify_equilibrium(g, cfg, level=args.level)
    data = {"config": cfg.describe()}
    data.update(report.as_dict())
    if args.format == "text":
        verdict = "equilibrium" if report.is_equilibrium else f"witness: {report.witness}"
        _emit(args, f"{verdict}\n")
    else:
        _emit(args, textio.to_json_text(data))
    return EXIT_OK if report.is_equilibrium else EXIT_ASSERTION


def _load_schedule(spec_text, g, cfg):
    """Resolve --schedule into a ready-to-run scripted scheme."""
    if spec_text == "adversarial":
        return adversarial_schedule(g.n, cfg)
    if spec_text in (DEGAOG_NE, DEG2AOG_2NE):
        return scripted_linear_sequences(g.n, spec_text)
    moves = json.loads(pathlib.Path(spec_text).read_text())
    kinds = {"add": AddEdge, "delete": DeleteEdge}
    out = []
    for entry in moves:
        agent = entry["agent"]
        kind = entry["type"]
        if kind == "swap":
            out.append((agent, SwapEdge(entry["old_target"], entry["new_target"])))
        elif kind in kinds:
            out.append((agent, kinds[kind](entry["target"])))
        else:
            raise ValueError(f"unknown move type {kind!r} in schedule file")
    return ActivationScheme.scripted(out)


def _cmd_dynamics(args):
    g = _read_graph(args.graph)
    cfg = _config_from(args)
    if args.schedule is not None:
        scheme = _load_schedule(args.schedule, g, cfg)
    elif args.scheme == "uniform-random":
        if args.seed is None:
            raise ValueError("--scheme uniform-random requires --seed")
        scheme = ActivationScheme.uniform_random(args.seed, move_policy=args.policy)
    else:
        scheme = ActivationScheme.round_robin(move_policy=args.policy)
    trace = run_dynamics(g, cfg, scheme, max_steps=args.max_steps)
    if args.format == "csv":
        _emit(
            args,
            textio.to_csv_text(
                ("n", "steps", "rounds", "diameter", "social_cost"), [trace.csv_row()]
            ),
        )
    elif args.format == "text":
        _emit(
            args,
            f"outcome: {trace.outcome}\nsteps: {len(trace.steps)}\n"
            f"activations: {trace.activations}\nrounds: {trace.rounds}\n"
            f"final diameter: {trace.final_diameter}\n"
            f"final social cost: {trace.final_social_cost}\n",
        )
    else:
        _emit(args, textio.to_json_text(trace.as_dict()))
    return EXIT_OK


def _cmd_enumerate(args):
    cfg = _config_from(args)
    summary = equilibrium_census(args.n, cfg)
    if args.witness_dir is not None:
        args.witness_dir.mkdir(parents=True, exist_ok=True)
        for label, graph in (
            ("opt", summary.opt_witness),
            ("best-eq", summary.best_witness),
            ("worst-eq", summary.worst_witness),
        ):
            (args.witness_dir / f"{label}.graph").write_text(textio.serialize_graph(graph))
    _emit(args, textio.to_json_text(summary.as_dict()))
    return EXIT_OK


def _cmd_reduce(args):
    if args.transformation == "set-cover-to-gadget":
        inst = textio.parse_set_cover_file(pathlib.Path(args.instance).read_text())
        layout = constructions.set_cover_to_best_response_gadget(inst)
        _emit(args, textio.serialize_graph(layout.graph))
        if args.roles is not None:
            roles = {
                "layout": layout.as_dict(),
                "role_map": {str(v): layout.role_map[v] for v in sorted(layout.role_map)},
            }
            args.roles.write_text(textio.to_json_text(roles))
    elif args.transformation == "dominating-to-set-cover":
        g = _read_graph(args.graph)
        inst = constructions.dominating_set_to_set_cover(g, args.q)
        _emit(args, textio.serialize_set_cover(inst))
    else:
        raise ValueError(f"unknown transformation {args.transformation!r}")
    return EXIT_OK


def _preset_star_equilibrium(seed):
    checks = []
    for n in range(3, 9):
        g = constructions.build_star(n)
        for variant in ("ncg", "aog"):
            for k in (None, 2):
                cfg = GameConfig(variant=variant, locality_k=k)
                rep = verify_equilibrium(g, cfg, level="exact")
                checks.append(
                    {"n": n, "config": cfg.describe(), "is_equilibrium": rep.is_equilibrium}
                )
    return checks, all(c["is_equilibrium"] for c in checks)


def _preset_star_optimal(seed):
    checks = []
    for n in range(2, 6):
        cost, witness = optimal_social_cost(n, GameConfig(variant="ncg"))
        checks.append({"n": n, "opt_cost": cost, "expected": 2 * (n - 1) ** 2})
    return checks, all(c["opt_cost"] == c["expected"] for c in checks)


def _preset_small_census(seed):
    checks = []
    for variant in ("ncg", "aog"):
        for k in (None, 2):
            cfg = GameConfig(variant=variant, locality_k=k)
            for n in (3, 4):
                s = equilibrium_census(n, cfg)
                checks.append(
                    {
                        "n": n,
                        "config": cfg.describe(),
                        "poa": s.as_dict()["poa"],
                        "pos": s.as_dict()["pos"],
                        "equilibria": s.equilibrium_count,
                    }
                )
    return checks, all(c["pos"] == 1.0 for c in checks)


def _preset_figure_cycle(seed):
    g = constructions.build_figure_network(constructions.FIG3_G1)
    cfg = GameConfig(variant="ncg")
    schedule = [
        (4, SwapEdge(7, 8)), (1, SwapEdge(8, 7)), (9, SwapEdge(8, 7)),
        (4, SwapEdge(8, 7)), (1, SwapEdge(7, 8)), (9, SwapEdge(7, 8)),
    ]
    trace = run_dynamics(g, cfg, ActivationScheme.scripted(schedule))
    deltas = [[r.cost_before, r.cost_after] for r in trace.steps]
    ok = trace.outcome == "cycle-detected" and trace.final == g
    return [{"outcome": trace.outcome, "costs": deltas}], ok


def _preset_adversarial_convergence(seed):
    checks = []
    ok = True
    for n in (16, 20):
        for k in (2, None):
            cfg = GameConfig(variant="aog", locality_k=k)
            schedule = adversarial_schedule(n, cfg)
            g = constructions.build_path(n)
            trace = run_dynamics(g, cfg, ActivationScheme.scripted(schedule))
            entry = {
                "n": n,
                "config": cfg.describe(),
                "steps": len(trace.steps),
                "outcome": trace.outcome,
                "final_diameter": trace.final_diameter,
            }
            checks.append(entry)
            ok = ok and len(trace.steps) == len(schedule) and trace.final_diameter == 3
    return checks, ok


def _preset_linear_equilibria(seed):
    checks = []
    ok = True
    for which, n, cfg in (
        (DEGAOG_NE, 13, GameConfig(variant="aog")),
        (DEG2AOG_2NE, 12, GameConfig(variant="aog", locality_k=2)),
    ):
        schedule = scripted_linear_sequences(n, which)
        trace = run_dynamics(constructions.build_path(n), cfg, ActivationScheme.scripted(schedule))
        rep = verify_equilibrium(trace.final, cfg, level="exact")
        checks.append(
            {
                "sequence": which,
                "n": n,
                "outcome": trace.outcome,
                "final_is_equilibrium": rep.is_equilibrium,
            }
        )
        ok = ok and trace.outcome == "converged" and rep.is_equilibrium
    return checks, ok


def _preset_set_cover_gadget(seed):
    inst = constructions.SetCoverInstance(
        universe_size=8, sets=((0, 1, 2, 3), (4, 5, 6, 7), (2, 3, 4, 5)), q=4
    )
    layout = constructions.set_cover_to_best_response_gadget(inst)
    cfg = GameConfig(variant="ncg", locality_k=2)
    strategy, _ = best_response_exact(layout.graph, layout.agent, cfg)
    cover = layout.cover_from_targets(strategy)
    from degprice.oracle import min_set_cover

    size, _ = min_set_cover(inst)
    ok = len(cover) == size and inst.is_cover(cover)
    return [{"cover": list(cover), "optimal_size": size}], ok


PRESETS = {
    "star-equilibrium": _preset_star_equilibrium,
    "star-optimal": _preset_star_optimal,
    "small-census": _preset_small_census,
    "figure-cycle": _preset_figure_cycle,
    "adversarial-convergence": _preset_adversarial_convergence,
    "linear-equilibria": _preset_linear_equilibria,
    "set-cover-gadget": _preset_set_cover_gadget,
}


def _cmd_preset(args):
    fn = PRESETS[args.name]
    checks, passed = fn(args.seed)
    report = {
        "preset": args.name,
        "seed": args.seed,
        "passed": passed,
        "checks": checks,
    }
    _emit(args, textio.to_json_text(report))
    return EXIT_OK if passed else EXIT_ASSERTION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="degprice", description="degree-priced network creation game toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="emit a named network as a graph file")
    p.add_argument("family", help="star|path|cycle|clique or a figure name")
    p.add_argument("--n", type=int, default=None)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("cost", help="agent cost breakdowns and social cost")
    p.add_argument("graph")
    p.add_argument("--agent", type=int, default=None)
    _add_game_flags(p)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_cost)

    p = sub.add_parser("best-response", help="exact best response for one agent")
    p.add_argument("graph")
    p.add_argument("--agent", type=int, required=True)
    _add_game_flags(p)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_best_response)

    p = sub.add_parser("verify", help="equilibrium check (exit 1 if not an equilibrium)")
    p.add_argument("graph")
    p.add_argument("--level", choices=("exact", "single-move"), default="single-move")
    _add_game_flags(p)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("dynamics", help="run improving-response dynamics")
    p.add_argument("graph")
    p.add_argument("--scheme", choices=("round-robin", "uniform-random"), default="round-robin")
    p.add_argument("--policy", choices=POLICIES, default=BEST_SINGLE_EDGE)
    p.add_argument(
        "--schedule",
        default=None,
        help="scripted run: 'adversarial', a named sequence, or a JSON move file",
    )
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=100_000)
    _add_game_flags(p)
    _add_out_flags(p, formats=("json", "csv", "text"))
    p.set_defaults(fn=_cmd_dynamics)

    p = sub.add_parser("enumerate", help="exhaustive small-n equilibrium census")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--witness-dir", type=pathlib.Path, default=None)
    _add_game_flags(p)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_enumerate)

    p = sub.add_parser("reduce", help="instance transformations")
    p.add_argument("transformation", choices=("set-cover-to-gadget", "dominating-to-set-cover"))
    p.add_argument("--instance", default=None)
    p.add_argument("--graph", default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--roles", type=pathlib.Path, default=None)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("preset", help="run a named experiment preset")
    p.add_argument("name", choices=sorted(PRESETS))
    p.add_argument("--seed", type=int, default=0)
    _add_out_flags(p)
    p.set_defaults(fn=_cmd_preset)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ResourceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (GraphFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleInstanceError, ScheduleReplayError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except DegpriceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERTION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
