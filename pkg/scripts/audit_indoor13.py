#!/usr/bin/env python3
"""Audit the engineered 13-panel indoor scenario.

Checks the geometric invariants the layout was designed around — which pairs
have line of sight, panel spacing, beam-grid alignment of every lane entrance
— and then solves it with each scheme to print the headline numbers. Exits
nonzero if any designed-in property no longer holds.
"""

import argparse
import math
import sys

from irs_routing.scene import (
    bs_departure_angle,
    build_bundled_scenario,
    build_los_map,
)
from irs_routing.solver import (
    SCHEMES,
    all_simple_routes,
    solve_max_min_routing,
    validate_routes,
)

REQUIRED_LINKS = [
    # four two-hop lanes
    (0, 1), (1, 2), (2, 14),
    (0, 3), (3, 4), (4, 15),
    (0, 7), (7, 8), (8, 16),
    (0, 9), (9, 10), (10, 17),
    # single-hop alternates
    (0, 5), (5, 14), (0, 6), (6, 15), (0, 11), (11, 16), (0, 12), (12, 17),
]

FORBIDDEN_LINKS = [
    (0, 14), (0, 15), (0, 16), (0, 17),   # users are never fed directly
    (1, 3),                               # adjacent lane entrances screened
    (3, 7),                               # engineered blocker between lanes
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=5)
    args = ap.parse_args()

    scn = build_bundled_scenario()
    los = build_los_map(scn)
    failures = []

    def check(ok: bool, label: str) -> None:
        print(f"  [{'ok' if ok else 'FAIL'}] {label}")
        if not ok:
            failures.append(label)

    print("link structure")
    for a, b in REQUIRED_LINKS:
        check(los.is_los(a, b), f"{a}-{b} has line of sight")
    for a, b in FORBIDDEN_LINKS:
        check(not los.is_los(a, b), f"{a}-{b} is blocked")

    print("placement")
    pairs = [(a.id, b.id, math.dist(a.position, b.position))
             for a in scn.nodes for b in scn.nodes if a.id < b.id]
    dmin = min(d for _, _, d in pairs)
    check(dmin >= scn.d0 - 1e-12, f"minimum node spacing {dmin:.3f} m >= d0 {scn.d0} m")

    print("beam-grid alignment of lane entrances")
    entrances = sorted({j for j in scn.irs_ids if los.is_los(0, j)})
    for j in entrances:
        s = math.sin(bs_departure_angle(scn, j))
        snapped = round(s * 16.0)
        check(abs(s - snapped / 16.0) < 1e-9,
              f"panel {j}: sin(departure) = {snapped}/16")
    sines = {round(math.sin(bs_departure_angle(scn, j)) * 16) for j in entrances}
    check(len(sines) == len(entrances), "entrance beams occupy distinct grid points")

    print("routing outcomes")
    counts = {u: len(r) for u, r in all_simple_routes(scn).items()}
    print(f"  admissible routes per user: {counts}")
    results = {}
    for scheme in SCHEMES:
        sol = solve_max_min_routing(scn, q=args.q, scheme=scheme)
        results[scheme] = sol
        obj = "infeasible" if sol.objective_db is None else f"{sol.objective_db:7.2f} dB"
        print(f"  {scheme:>13}: {obj}  served {len(sol.admitted)}/{scn.n_users}"
              f"  q_used={sol.q_used}")
    best = results["maxmin"]
    check(best.feasible, "max-min routing serves every user")
    check(not validate_routes(scn, {u: a.route for u, a in best.assignments.items()}),
          "solver routes pass the independent validator")
    for scheme in ("sequential", "min_pathloss", "max_beam_gain"):
        sol = results[scheme]
        dominated = (not sol.feasible) or sol.objective <= best.objective + 1e-15
        check(dominated, f"{scheme} does not beat max-min routing")
    check(results["continuous"].objective >= best.objective,
          "continuous phases upper-bound the codebook solution")

    esc = solve_max_min_routing(scn, q=1, q_max=8)
    check(esc.feasible and esc.q_used == 2,
          "candidate doubling rescues the q=1 start at q=2")

    if failures:
        print(f"\n{len(failures)} audit failure(s)")
        return 1
    print("\nall audits passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
