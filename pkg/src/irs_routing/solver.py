"""Joint route selection for all users under path-separation constraints.

Each user gets a list of candidate routes (the q best by line-graph cost).
Two routes conflict when a panel of one coincides with, or has line of sight
to, any panel or the user of the other; selecting one conflict-free route per
user is a clique in the K-partite compatibility graph. The search minimises
the maximum route cost (equivalently maximises the minimum idealized gain),
enumerating partial cliques in user order and, at the last user, taking only
the best compatible candidate; disabling that last-level shortcut must not
change the optimum, which the tests check. Ties are broken toward the
lexicographically smallest candidate-index tuple.

If no clique exists, the candidate depth q is doubled up to q_max; if the
problem stays infeasible the solver admits the largest user subset that can
be served (subsets scanned in decreasing size, equal sizes compared by their
best clique and then by subset order).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations, product

from .beamforming import (
    RouteBeams,
    cascade_response,
    configure_route,
    route_gain_idealized,
)
from .graphs import (
    LineGraph,
    PathRecord,
    RoutingGraph,
    build_line_graph,
    build_routing_graph,
    k_shortest_paths,
    shortest_path,
    vertices_touching,
)
from .scene import IRS, LosMap, Scenario, build_los_map

SCHEMES = ("maxmin", "sequential", "min_pathloss", "max_beam_gain", "continuous")


@dataclass
class UserAssignment:
    user: int
    route: tuple[int, ...]
    cost: float                      # selection cost (line-graph weight sum)
    beams: RouteBeams
    gain: float                      # realized end-to-end power gain
    gain_idealized: float


@dataclass
class Solution:
    scheme: str
    mode: str
    feasible: bool
    admitted: tuple[int, ...]
    assignments: dict[int, UserAssignment]
    objective: float | None          # min realized gain over admitted users
    q_used: int
    explored_nodes: int = 0
    separation_enforced: bool = True
    wall_time_ms: float = 0.0
    notes: list[str] = field(default_factory=list)

    def gains_db(self) -> dict[int, float]:
        return {u: 10.0 * math.log10(a.gain) for u, a in self.assignments.items()}

    @property
    def objective_db(self) -> float | None:
        if self.objective is None or self.objective <= 0.0:
            return None
        return 10.0 * math.log10(self.objective)


def routes_conflict(
    los: LosMap,
    scn: Scenario,
    route_a: tuple[int, ...],
    route_b: tuple[int, ...],
    hops: int = 1,
) -> bool:
    """Path-separation test: panels of one route must not coincide with or see
    any panel or the user of the other route.

    hops > 1 widens "see" to reachability within that many LoS links relayed
    through panels not on either route.
    """
    panels_a = [n for n in route_a[1:-1]]
    panels_b = [n for n in route_b[1:-1]]
    ends_a = route_a[-1]
    ends_b = route_b[-1]
    if hops <= 1:
        for i in panels_a:
            for v in panels_b + [ends_b]:
                if i == v or los.is_los(i, v):
                    return True
        for i in panels_b:
            if i == ends_a or los.is_los(i, ends_a):
                return True
        return False
    targets = set(panels_b) | {ends_b}
    if targets & set(panels_a):
        return True
    relays = [
        j for j in scn.irs_ids if j not in panels_a and j not in targets
    ]
    frontier = set(panels_a) | {ends_a}
    seen = set(frontier)
    for depth in range(hops):
        nxt = set()
        for x in frontier:
            for y in (relays + list(targets)) if depth < hops - 1 else targets:
                if y not in seen and los.is_los(x, y):
                    if y in targets:
                        return True
                    nxt.add(y)
        seen |= nxt
        frontier = nxt
        if not frontier:
            break
    return False


def candidate_paths(
    scn: Scenario, lg: LineGraph, users: list[int], q: int
) -> dict[int, list[PathRecord]]:
    return {u: k_shortest_paths(lg, u, q) for u in users}


def find_best_clique(
    users: list[int],
    cands: dict[int, list[PathRecord]],
    compatible: dict[tuple[int, int, int, int], bool],
    prune: bool = True,
) -> tuple[dict[int, int] | None, int]:
    """Best one-candidate-per-user clique, minimising the max candidate cost.

    `compatible[(ua, ia, ub, ib)]` tells whether candidate ia of user ua can
    coexist with candidate ib of user ub. With prune=True the last user
    contributes only its single best compatible candidate (cost, then index);
    with prune=False every compatible candidate is tried. Returns the chosen
    index per user plus the number of search-tree nodes visited.
    """
    best: tuple[float, tuple[int, ...]] | None = None
    explored = 0

    def recurse(depth: int, chosen: list[int], worst: float) -> None:
        nonlocal best, explored
        u = users[depth]
        options = [
            i
            for i, rec in enumerate(cands[u])
            if not rec.virtual
            and all(
                compatible[(users[d], chosen[d], u, i)] for d in range(depth)
            )
        ]
        if depth == len(users) - 1:
            if not options:
                return
            if prune:
                options = [min(options, key=lambda i: (cands[u][i].cost, i))]
            for i in options:
                explored += 1
                cand = (max(worst, cands[u][i].cost), tuple(chosen + [i]))
                if best is None or cand < best:
                    best = cand
            return
        for i in options:
            explored += 1
            recurse(depth + 1, chosen + [i], max(worst, cands[u][i].cost))

    if users:
        recurse(0, [], -math.inf)
    if best is None:
        return None, explored
    return {u: best[1][d] for d, u in enumerate(users)}, explored


def _compatibility(
    scn: Scenario,
    los: LosMap,
    users: list[int],
    cands: dict[int, list[PathRecord]],
    enforce: bool,
) -> dict[tuple[int, int, int, int], bool]:
    table: dict[tuple[int, int, int, int], bool] = {}
    for ua, ub in combinations(users, 2):
        for ia, ra in enumerate(cands[ua]):
            for ib, rb in enumerate(cands[ub]):
                ok = True
                if ra.virtual or rb.virtual:
                    ok = False
                elif enforce:
                    ok = not routes_conflict(los, scn, ra.route, rb.route)
                table[(ua, ia, ub, ib)] = ok
                table[(ub, ib, ua, ia)] = ok
    return table


def _line_graph_for_scheme(scn: Scenario, graph: RoutingGraph, scheme: str) -> tuple[LineGraph, str]:
    """Selection line graph and the beam mode used for realized gains."""
    if scheme == "continuous":
        return build_line_graph(scn, graph, "continuous"), "continuous"
    if scheme == "min_pathloss":
        return build_line_graph(scn, graph, "discrete", unit_amplitude=True), "discrete"
    if scheme == "max_beam_gain":
        return build_line_graph(scn, graph, "discrete", beam_only=True), "discrete"
    return build_line_graph(scn, graph, "discrete"), "discrete"


def _assign(scn: Scenario, user: int, rec: PathRecord, beam_mode: str) -> UserAssignment:
    beams = configure_route(scn, rec.route, beam_mode)
    # reported gain comes from the explicit matrix cascade, so a bug in the
    # weight algebra cannot silently inflate the objective
    return UserAssignment(
        user=user,
        route=rec.route,
        cost=rec.cost,
        beams=beams,
        gain=abs(cascade_response(scn, beams)) ** 2,
        gain_idealized=route_gain_idealized(scn, rec.route, beam_mode),
    )


def solve_max_min_routing(
    scn: Scenario,
    q: int = 5,
    q_max: int = 40,
    scheme: str = "maxmin",
    enforce_separation: bool = True,
    los: LosMap | None = None,
) -> Solution:
    """Max-min route selection (or one of the selection-metric benchmarks)."""
    t0 = time.perf_counter()
    if scheme == "sequential":
        sol = solve_sequential(scn, los=los)
        sol.wall_time_ms = 1000.0 * (time.perf_counter() - t0)
        return sol
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    graph = build_routing_graph(scn, los)
    lg, beam_mode = _line_graph_for_scheme(scn, graph, scheme)
    users = scn.user_ids

    cur_q = q
    while True:
        cands = candidate_paths(scn, lg, users, cur_q)
        table = _compatibility(scn, graph.los, users, cands, enforce_separation)
        choice, explored = find_best_clique(users, cands, table)
        if choice is not None:
            assignments = {
                u: _assign(scn, u, cands[u][i], beam_mode) for u, i in choice.items()
            }
            objective = min(a.gain for a in assignments.values())
            return Solution(
                scheme=scheme,
                mode=beam_mode,
                feasible=True,
                admitted=tuple(users),
                assignments=assignments,
                objective=objective,
                q_used=cur_q,
                explored_nodes=explored,
                separation_enforced=enforce_separation,
                wall_time_ms=1000.0 * (time.perf_counter() - t0),
            )
        if cur_q >= q_max:
            sol = _max_admission(
                scn, lg, graph, users, cands, scheme, beam_mode,
                enforce_separation, cur_q, explored,
            )
            sol.wall_time_ms = 1000.0 * (time.perf_counter() - t0)
            return sol
        cur_q = min(2 * cur_q, q_max)


def _max_admission(
    scn: Scenario,
    lg: LineGraph,
    graph: RoutingGraph,
    users: list[int],
    cands: dict[int, list[PathRecord]],
    scheme: str,
    beam_mode: str,
    enforce: bool,
    q_used: int,
    explored0: int,
) -> Solution:
    """Serve the largest user subset that still admits a clique."""
    explored = explored0
    for size in range(len(users) - 1, 0, -1):
        best_choice: dict[int, int] | None = None
        best_key: tuple[float, tuple[int, ...]] | None = None
        for subset in combinations(users, size):
            sub = list(subset)
            table = _compatibility(scn, graph.los, sub, cands, enforce)
            choice, n = find_best_clique(sub, cands, table)
            explored += n
            if choice is None:
                continue
            worst = max(cands[u][i].cost for u, i in choice.items())
            key = (worst, subset)
            if best_key is None or key < best_key:
                best_key = key
                best_choice = choice
        if best_choice is not None:
            assignments = {
                u: _assign(scn, u, cands[u][i], beam_mode)
                for u, i in best_choice.items()
            }
            objective = min(a.gain for a in assignments.values())
            return Solution(
                scheme=scheme,
                mode=beam_mode,
                feasible=False,
                admitted=tuple(sorted(best_choice)),
                assignments=assignments,
                objective=objective,
                q_used=q_used,
                explored_nodes=explored,
                separation_enforced=enforce,
                notes=[f"admitted {len(best_choice)} of {len(users)} users"],
            )
    return Solution(
        scheme=scheme,
        mode=beam_mode,
        feasible=False,
        admitted=(),
        assignments={},
        objective=None,
        q_used=q_used,
        explored_nodes=explored,
        separation_enforced=enforce,
        notes=["no user can be served"],
    )


def solve_sequential(scn: Scenario, los: LosMap | None = None) -> Solution:
    """Benchmark: serve users in id order, each by its cheapest route, then
    retire that route's panels and everything they see."""
    graph = build_routing_graph(scn, los)
    lg = build_line_graph(scn, graph, "discrete")
    removed: set[int] = set()
    assignments: dict[int, UserAssignment] = {}
    for u in scn.user_ids:
        if u in removed:
            continue
        blocked = vertices_touching(lg, removed)
        res = shortest_path(lg, lg.terminals[u], blocked_vertices=blocked)
        if res is None:
            continue
        cost, line_path = res
        route = lg.route_of(line_path)
        rec = PathRecord(cost=cost, line_path=line_path, route=route)
        assignments[u] = _assign(scn, u, rec, "discrete")
        panels = set(route[1:-1])
        removed |= panels | {u}
        for i in panels:
            for v in range(1, len(scn.nodes)):  # the BS is shared, never retired
                if graph.los.is_los(i, v):
                    removed.add(v)
        for i in scn.irs_ids:
            if graph.los.is_los(i, u):
                removed.add(i)
    admitted = tuple(sorted(assignments))
    objective = min((a.gain for a in assignments.values()), default=None)
    return Solution(
        scheme="sequential",
        mode="discrete",
        feasible=len(admitted) == len(scn.user_ids),
        admitted=admitted,
        assignments=assignments,
        objective=objective,
        q_used=1,
        separation_enforced=True,
    )


def validate_routes(
    scn: Scenario,
    routes: dict[int, tuple[int, ...]],
    los: LosMap | None = None,
    check_separation: bool = True,
) -> list[str]:
    """Independent constraint check on a set of routes; returns violations.

    Checked per route: starts at the source, ends at its user, interior nodes
    are panels, no panel reflects twice, every hop has line of sight. Checked
    across routes: no shared panel, no line of sight between any node of one
    route and any node of another.
    """
    if los is None:
        los = build_los_map(scn)
    bad: list[str] = []
    for u, route in sorted(routes.items()):
        if len(route) < 3 or route[0] != 0:
            bad.append(f"route for user {u} must read (0, panels..., {u}), got {route}")
            continue
        if route[-1] != u:
            bad.append(f"route for user {u} ends at node {route[-1]}, not at the user")
        interior = route[1:-1]
        for n in interior:
            if scn.kind(n) != IRS:
                bad.append(f"node {n} inside the route for user {u} is not a panel")
        dupes = {n for n in interior if interior.count(n) > 1}
        for n in sorted(dupes):
            bad.append(f"route for user {u} reflects at panel {n} more than once")
        for a, b in zip(route[:-1], route[1:]):
            if not los.is_los(a, b):
                bad.append(f"hop {a}->{b} in the route for user {u} has no line of sight")
    if check_separation:
        for ua, ub in combinations(sorted(routes), 2):
            ra, rb = routes[ua], routes[ub]
            shared = set(ra[1:-1]) & set(rb[1:-1])
            for p in sorted(shared):
                bad.append(f"routes for users {ua} and {ub} share panel {p}")
            for x in ra[1:]:
                for y in rb[1:]:
                    if x != y and los.is_los(x, y):
                        bad.append(
                            f"separation violated: node {x} (route of user {ua}) "
                            f"sees node {y} (route of user {ub})"
                        )
    return bad


def all_simple_routes(scn: Scenario, los: LosMap | None = None) -> dict[int, list[tuple[int, ...]]]:
    """Every admissible route per user, by depth-first search on the raw LoS
    map (panel hops strictly increase the distance from the BS)."""
    if los is None:
        los = build_los_map(scn)
    dist0 = {i: scn.distance(0, i) for i in scn.irs_ids}
    routes: dict[int, list[tuple[int, ...]]] = {u: [] for u in scn.user_ids}

    def extend(prefix: list[int]) -> None:
        j = prefix[-1]
        for u in scn.user_ids:
            if los.is_los(j, u):
                routes[u].append(tuple(prefix) + (u,))
        for r in scn.irs_ids:
            if los.is_los(j, r) and dist0[r] > dist0[j]:
                extend(prefix + [r])

    for j in scn.irs_ids:
        if los.is_los(0, j):
            extend([0, j])
    for u in routes:
        routes[u].sort()
    return routes


def brute_force_oracle(
    scn: Scenario,
    mode: str = "discrete",
    los: LosMap | None = None,
    limit: int = 10 ** 6,
) -> Solution:
    """Exhaustive reference solver for small instances.

    Enumerates every route tuple, keeps the separation-feasible ones, and
    picks the tuple minimising the maximum idealized route cost (ties: the
    per-user (cost, route) sequence). Raises when the tuple count exceeds
    `limit`.
    """
    t0 = time.perf_counter()
    if los is None:
        los = build_los_map(scn)
    users = scn.user_ids
    routes = all_simple_routes(scn, los)
    count = 1
    for u in users:
        count *= len(routes[u])
    if count > limit:
        raise ValueError(f"instance too large: {count} route tuples exceed {limit}")

    scored: dict[int, list[tuple[float, tuple[int, ...]]]] = {}
    for u in users:
        scored[u] = sorted(
            (-math.log(route_gain_idealized(scn, r, mode)), r) for r in routes[u]
        )

    def pair_ok(ra: tuple[int, ...], rb: tuple[int, ...]) -> bool:
        for x in ra[1:]:
            for y in rb[1:]:
                if x == y or los.is_los(x, y):
                    return False
        return True

    best_key = None
    best_tuple = None
    explored = 0
    for combo in product(*(scored[u] for u in users)):
        explored += 1
        ok = True
        for a in range(len(combo)):
            for b in range(a + 1, len(combo)):
                if not pair_ok(combo[a][1], combo[b][1]):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        key = (max(c for c, _ in combo), combo)
        if best_key is None or key < best_key:
            best_key = key
            best_tuple = combo
    if best_tuple is None:
        return Solution(
            scheme="oracle",
            mode=mode,
            feasible=False,
            admitted=(),
            assignments={},
            objective=None,
            q_used=0,
            explored_nodes=explored,
            wall_time_ms=1000.0 * (time.perf_counter() - t0),
            notes=["no separation-feasible route tuple exists"],
        )
    assignments = {
        u: _assign(scn, u, PathRecord(cost=c, line_path=(), route=r), mode)
        for u, (c, r) in zip(users, best_tuple)
    }
    return Solution(
        scheme="oracle",
        mode=mode,
        feasible=True,
        admitted=tuple(users),
        assignments=assignments,
        objective=min(a.gain for a in assignments.values()),
        q_used=0,
        explored_nodes=explored,
        wall_time_ms=1000.0 * (time.perf_counter() - t0),
    )


def solution_from_routes(
    scn: Scenario,
    routes: dict[int, tuple[int, ...]],
    mode: str = "discrete",
    scheme: str = "maxmin",
) -> Solution:
    """Rebuild a full solution (beams, gains) from bare routes, e.g. when
    loading a solution file."""
    assignments = {}
    for u, route in routes.items():
        cost = -math.log(route_gain_idealized(scn, tuple(route), mode))
        rec = PathRecord(cost=cost, line_path=(), route=tuple(route))
        assignments[u] = _assign(scn, u, rec, mode)
    objective = min((a.gain for a in assignments.values()), default=None)
    feasible = sorted(assignments) == scn.user_ids and not validate_routes(scn, routes)
    return Solution(
        scheme=scheme,
        mode=mode,
        feasible=feasible,
        admitted=tuple(sorted(assignments)),
        assignments=assignments,
        objective=objective,
        q_used=0,
    )
