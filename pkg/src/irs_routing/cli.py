"""Command-line front end.

Subcommands:
  solve      route all users in a scenario, print and optionally save
  evaluate   Monte-Carlo scattered-field metrics for a solution
  sweep      tabulate schemes across panel size, codebook bits, or alpha
  validate   check a scenario file, or a solution file against its scenario
  gen        write a scenario file (bundled layout, random, or chain)

Exit codes: 0 success, 2 usage error, 3 problem infeasible, 4 invalid
scenario or solution.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import evaluation, scene, solver

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_INVALID = 4


def _load(spec: str) -> scene.Scenario:
    if spec == "bundled":
        return scene.build_bundled_scenario()
    return scene.load_scenario(spec)


def _resize(scn: scene.Scenario, **overrides) -> scene.Scenario:
    return dataclasses.replace(scn, **overrides)


def _parse_values(text: str, as_int: bool) -> list[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            out.append(int(tok) if as_int else float(tok))
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", default="bundled",
                   help="scenario JSON path, or 'bundled' (default)")
    p.add_argument("--q", type=int, default=5, help="candidate routes per user")
    p.add_argument("--q-max", type=int, default=40,
                   help="cap for doubling q on infeasibility")
    p.add_argument("--seed", type=int, default=0)


def _solution_doc(sol: solver.Solution) -> dict:
    gains = sol.gains_db()
    users = {}
    for u in sorted(sol.assignments):
        a = sol.assignments[u]
        users[str(u)] = {
            "route": list(a.route),
            "gain_db": gains[u],
            "bs_beam": a.beams.active.index,
            "panel_beams": [
                [j, a.beams.passives[j].index1, a.beams.passives[j].index2]
                for j in a.route[1:-1]
            ],
        }
    return {
        "scheme": sol.scheme,
        "mode": sol.mode,
        "feasible": sol.feasible,
        "admitted": list(sol.admitted),
        "objective_db": sol.objective_db,
        "q_used": sol.q_used,
        "explored_nodes": sol.explored_nodes,
        "wall_time_ms": round(sol.wall_time_ms, 3),
        "users": users,
    }


def _load_solution(path: str) -> tuple[dict[int, tuple[int, ...]], str]:
    with open(path) as fh:
        doc = json.load(fh)
    routes = {int(u): tuple(rec["route"]) for u, rec in doc["users"].items()}
    return routes, doc.get("mode", "discrete")


def cmd_solve(args: argparse.Namespace) -> int:
    scn = _load(args.scenario)
    scheme = "continuous" if args.mode == "continuous" else args.scheme
    sol = solver.solve_max_min_routing(scn, q=args.q, q_max=args.q_max, scheme=scheme)
    gains = sol.gains_db()
    print(f"scheme={sol.scheme} mode={sol.mode} q_used={sol.q_used} "
          f"feasible={'yes' if sol.feasible else 'no'}")
    for u in sorted(sol.assignments):
        a = sol.assignments[u]
        hops = "->".join(str(n) for n in a.route)
        print(f"user {u}: route {hops}  gain {gains[u]:.2f} dB")
    if sol.objective_db is not None:
        print(f"objective (min user gain): {sol.objective_db:.2f} dB")
    for note in sol.notes:
        print(f"note: {note}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(_solution_doc(sol), fh, indent=1)
            fh.write("\n")
    return EXIT_OK if sol.feasible else EXIT_INFEASIBLE


def cmd_evaluate(args: argparse.Namespace) -> int:
    scn = _load(args.scenario)
    alphas = _parse_values(args.alpha, as_int=False)
    sol = None
    if args.solution:
        routes, mode = _load_solution(args.solution)
        sol = solver.solution_from_routes(scn, routes, mode)
    rows, users = evaluation.alpha_sweep_rows(
        scn,
        alphas,
        args.schemes.split(","),
        realizations=args.realizations,
        seed=args.seed,
        victim=args.victim,
        q=args.q,
        q_max=args.q_max,
        solution=sol,
    )
    if args.out:
        evaluation.write_rows_csv(rows, users, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        for r in rows:
            val = "n/a" if r["objective_db"] is None else f"{r['objective_db']:.2f} dB"
            print(f"alpha={r['value']:g} {r['scheme']}: {val}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    scn = _load(args.scenario)
    axis = args.sweep_axis
    if axis == "alpha":
        schemes = args.schemes.split(",") if args.schemes else list(evaluation.EVAL_SCHEMES[:3])
        values = _parse_values(args.sweep_values, as_int=False)
        rows, users = evaluation.alpha_sweep_rows(
            scn, values, schemes,
            realizations=args.realizations, seed=args.seed,
            q=args.q, q_max=args.q_max,
        )
    else:
        schemes = args.schemes.split(",") if args.schemes else list(solver.SCHEMES)
        values = _parse_values(args.sweep_values, as_int=True)
        if axis == "m0":
            def make(v):
                return _resize(scn, m1=int(v), m2=int(v))
        elif axis == "b0":
            def make(v):
                return _resize(scn, b1=int(v), b2=int(v))
        else:
            raise SystemExit(EXIT_USAGE)
        rows, users = evaluation.solver_sweep_rows(
            make, axis, values, schemes, q=args.q, q_max=args.q_max, seed=args.seed
        )
    evaluation.write_rows_csv(rows, users, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        scn = _load(args.scenario)
    except (ValueError, OSError, KeyError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.solution:
        routes, _ = _load_solution(args.solution)
        problems = solver.validate_routes(scn, routes)
        if problems:
            for p in problems:
                print(f"invalid solution: {p}", file=sys.stderr)
            return EXIT_INVALID
        print(f"ok: {len(routes)} routes satisfy all path constraints")
        return EXIT_OK
    print(f"ok: {scn.n_irs} panels, {scn.n_users} users, "
          f"{scn.m1}x{scn.m2} elements, {scn.n_b} BS antennas")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    if args.kind == "bundled":
        scn = scene.build_bundled_scenario()
    elif args.kind == "random":
        scn = scene.build_random_scenario(
            args.seed,
            n_irs=args.n_irs,
            n_users=args.n_users,
            room=(args.room_x, args.room_y),
            los_threshold=args.los_threshold,
        )
    elif args.kind == "chain":
        scn = scene.build_chain_scenario(args.seed, n_hops=args.n_irs)
    else:
        raise SystemExit(EXIT_USAGE)
    scene.save_scenario(scn, args.out)
    print(f"wrote {args.kind} scenario to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="irsroute", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="route all users")
    _add_common(p)
    p.add_argument("--mode", choices=("discrete", "continuous"), default="discrete")
    p.add_argument("--scheme", choices=solver.SCHEMES, default="maxmin")
    p.add_argument("--out", default=None, help="write solution JSON here")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("evaluate", help="scattered-field metrics")
    _add_common(p)
    p.add_argument("--solution", default=None,
                   help="solution JSON from 'solve --out'; solved fresh if omitted")
    p.add_argument("--alpha", default="2.5", help="comma-separated exponents")
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--victim", type=int, default=None)
    p.add_argument("--schemes", default="cascade,overall_scatter,interference")
    p.add_argument("--out", default=None, help="write CSV here")
    p.set_defaults(fn=cmd_evaluate)

    p = sub.add_parser("sweep", help="tabulate schemes across a parameter")
    _add_common(p)
    p.add_argument("--sweep-axis", choices=("m0", "b0", "alpha"), required=True)
    p.add_argument("--sweep-values", required=True, help="comma-separated values")
    p.add_argument("--schemes", default=None)
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--out", required=True, help="write CSV here")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("validate", help="check a scenario or solution file")
    p.add_argument("--scenario", default="bundled")
    p.add_argument("--solution", default=None,
                   help="also check this solution JSON against the scenario")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("gen", help="write a scenario file")
    p.add_argument("--kind", choices=("bundled", "random", "chain"), default="bundled")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-irs", type=int, default=8)
    p.add_argument("--n-users", type=int, default=3)
    p.add_argument("--room-x", type=float, default=10.0)
    p.add_argument("--room-y", type=float, default=4.0)
    p.add_argument("--los-threshold", type=float, default=4.5)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_gen)
    return ap


def entrypoint(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(entrypoint())
