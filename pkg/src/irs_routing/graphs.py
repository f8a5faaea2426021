"""Routing graph over the deployment and its weighted line graph.

The base graph G0 is a DAG: BS -> panel edges, panel -> panel edges oriented
away from the BS (strictly increasing BS distance), and panel -> user edges,
all gated by the LoS map. Reflection amplitudes depend on the *pair* of hops
meeting at a panel, so path costs are additive only on the line graph, whose
vertices are a source, one vertex per G0 edge into a panel, and one terminal
per user.

With hop distances d, per-hop reference gain beta, BS array gain n_b and
reflection amplitudes A, a route with n reflections has idealized gain

    beta^(n+1) * n_b * prod A_t^2 / prod d_h^2

and the line-graph path cost below equals exactly -ln of that, so shortest
path = best route. Weights can be negative; shortest paths are computed by
relaxation in topological order, which is exact on DAGs. Ties are broken
toward the lexicographically smallest vertex-key sequence.

Vertex keys sort as: source (0,), edge vertices (1, i, j), terminals (2, u);
comparing key sequences therefore matches comparing the underlying routes.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from graphlib import TopologicalSorter

import numpy as np

from .beamforming import GainTable, build_gain_table
from .scene import IRS, USER, LosMap, Scenario, build_los_map

Key = tuple


@dataclass
class RoutingGraph:
    los: LosMap
    bs_distances: np.ndarray
    successors: dict[int, tuple[int, ...]]

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, succ in sorted(self.successors.items()) for b in succ]


def build_routing_graph(scn: Scenario, los: LosMap | None = None) -> RoutingGraph:
    if los is None:
        los = build_los_map(scn)
    n = len(scn.nodes)
    dist0 = np.array([scn.distance(0, i) for i in range(n)])
    succ: dict[int, list[int]] = {0: []}
    for j in scn.irs_ids:
        succ[j] = []
        if los.is_los(0, j):
            succ[0].append(j)
    for i in scn.irs_ids:
        for j in scn.irs_ids:
            if i != j and los.is_los(i, j) and dist0[j] > dist0[i]:
                succ[i].append(j)
        for u in scn.user_ids:
            if los.is_los(i, u):
                succ[i].append(u)
    return RoutingGraph(
        los=los,
        bs_distances=dist0,
        successors={k: tuple(sorted(v)) for k, v in succ.items()},
    )


SOURCE_KEY: Key = (0,)


def edge_key(i: int, j: int) -> Key:
    return (1, i, j)


def user_key(u: int) -> Key:
    return (2, u)


@dataclass
class LineGraph:
    verts: list[Key]
    index: dict[Key, int]
    adj: list[list[tuple[int, float]]]   # vertex -> sorted [(succ, weight)]
    topo: list[int]
    source: int
    terminals: dict[int, int]            # user id -> vertex index

    def route_of(self, line_path: tuple[int, ...]) -> tuple[int, ...]:
        """Convert a line-graph path back to a G0 node route."""
        route = [0]
        for idx in line_path[1:]:
            key = self.verts[idx]
            route.append(key[2] if key[0] == 1 else key[1])
        return tuple(route)


def build_line_graph(
    scn: Scenario,
    graph: RoutingGraph,
    mode: str = "discrete",
    *,
    unit_amplitude: bool = False,
    beam_only: bool = False,
    table: GainTable | None = None,
) -> LineGraph:
    """Weighted line graph for one beam mode.

    unit_amplitude: treat every reflection amplitude as 1 (pure path loss).
    beam_only: treat every distance as 1 and beta as 1 (pure beam gain).
    table: precomputed reflection amplitudes; built on demand if omitted.
    """
    log_beta = 0.0 if beam_only else math.log(scn.beta)
    if table is None and not unit_amplitude:
        table = build_gain_table(scn, graph.los, mode)

    def hop_term(d: float) -> float:
        return (0.0 if beam_only else 2.0 * math.log(d)) - log_beta

    def amp_term(i: int, j: int, r: int) -> float:
        if unit_amplitude:
            return 0.0
        try:
            return -2.0 * math.log(table.amplitude(i, j, r))
        except KeyError:
            raise ValueError(f"gain table has no entry for triple ({i}, {j}, {r})") from None

    verts: list[Key] = [SOURCE_KEY]
    for i, succ in sorted(graph.successors.items()):
        for j in succ:
            if scn.kind(j) == IRS:
                verts.append(edge_key(i, j))
    for u in scn.user_ids:
        verts.append(user_key(u))
    verts.sort()
    index = {k: i for i, k in enumerate(verts)}

    adj: list[list[tuple[int, float]]] = [[] for _ in verts]
    for j in graph.successors.get(0, ()):
        if scn.kind(j) == IRS:
            w = hop_term(scn.distance(0, j)) - math.log(scn.n_b)
            adj[index[SOURCE_KEY]].append((index[edge_key(0, j)], w))
    for i, succ in sorted(graph.successors.items()):
        for j in succ:
            if scn.kind(j) != IRS:
                continue
            v = index[edge_key(i, j)]
            for r in graph.successors.get(j, ()):
                w = hop_term(scn.distance(j, r)) + amp_term(i, j, r)
                if scn.kind(r) == IRS:
                    adj[v].append((index[edge_key(j, r)], w))
                else:
                    adj[v].append((index[user_key(r)], w))
    for lst in adj:
        lst.sort()

    ts: TopologicalSorter = TopologicalSorter()
    for v in range(len(verts)):
        ts.add(v)
    for v, lst in enumerate(adj):
        for s, _ in lst:
            ts.add(s, v)
    topo = list(ts.static_order())

    terminals = {u: index[user_key(u)] for u in scn.user_ids}
    return LineGraph(
        verts=verts, index=index, adj=adj, topo=topo,
        source=index[SOURCE_KEY], terminals=terminals,
    )


def vertices_touching(lg: LineGraph, nodes: set[int]) -> set[int]:
    """Line-graph vertices that reference any of the given G0 nodes."""
    out = set()
    for idx, key in enumerate(lg.verts):
        if key[0] == 1 and (key[1] in nodes or key[2] in nodes):
            out.add(idx)
        elif key[0] == 2 and key[1] in nodes:
            out.add(idx)
    return out


def shortest_path(
    lg: LineGraph,
    target: int,
    blocked_vertices: set[int] = frozenset(),
    blocked_edges: set[tuple[int, int]] = frozenset(),
    source: int | None = None,
) -> tuple[float, tuple[int, ...]] | None:
    """Minimum-cost source -> target path by topological relaxation.

    Exact with negative weights (the graph is a DAG). Among equal-cost paths
    the lexicographically smallest vertex sequence wins. Returns None when
    target is unreachable.
    """
    src = lg.source if source is None else source
    if src == target:
        raise ValueError("source and target must differ")
    if src in blocked_vertices or target in blocked_vertices:
        return None
    n = len(lg.verts)
    cost = [math.inf] * n
    path: list[tuple[int, ...] | None] = [None] * n
    cost[src] = 0.0
    path[src] = (src,)
    for v in lg.topo:
        if path[v] is None or v in blocked_vertices:
            continue
        for s, w in lg.adj[v]:
            if s in blocked_vertices or (v, s) in blocked_edges:
                continue
            cand_cost = cost[v] + w
            cand_path = path[v] + (s,)
            if cand_cost < cost[s] - 1e-15 or (
                abs(cand_cost - cost[s]) <= 1e-15
                and (path[s] is None or cand_path < path[s])
            ):
                cost[s] = cand_cost
                path[s] = cand_path
    if path[target] is None:
        return None
    return cost[target], path[target]


@dataclass(frozen=True)
class PathRecord:
    """One candidate route for a user, with its line-graph cost."""

    cost: float
    line_path: tuple[int, ...]
    route: tuple[int, ...]  # G0 nodes: (0, panels..., user)

    @property
    def virtual(self) -> bool:
        return math.isinf(self.cost)


def virtual_path(user: int) -> PathRecord:
    return PathRecord(cost=math.inf, line_path=(), route=(0, user))


def k_shortest_paths(lg: LineGraph, user: int, q: int) -> list[PathRecord]:
    """Yen's algorithm: the q best loopless routes to a user, padded with
    unreachable placeholders when fewer exist."""
    target = lg.terminals[user]
    found: list[tuple[float, tuple[int, ...]]] = []
    first = shortest_path(lg, target)
    if first is not None:
        found.append(first)
    candidates: list[tuple[float, tuple[int, ...]]] = []
    seen: set[tuple[int, ...]] = {found[0][1]} if found else set()

    while found and len(found) < q:
        prev_cost, prev = found[-1]
        prefix_cost = 0.0
        for i in range(len(prev) - 1):
            spur = prev[i]
            root = prev[: i + 1]
            blocked_edges = set()
            for _, p in found:
                if len(p) > i + 1 and p[: i + 1] == root:
                    blocked_edges.add((p[i], p[i + 1]))
            blocked_vertices = set(root[:-1])
            rest = shortest_path(
                lg, target, blocked_vertices, blocked_edges, source=spur
            )
            if rest is not None:
                total = prefix_cost + rest[0]
                full = root[:-1] + rest[1]
                if full not in seen:
                    seen.add(full)
                    heapq.heappush(candidates, (total, full))
            prefix_cost += _edge_weight(lg, prev[i], prev[i + 1])
        if not candidates:
            break
        found.append(heapq.heappop(candidates))

    records = [
        PathRecord(cost=c, line_path=p, route=lg.route_of(p)) for c, p in found
    ]
    while len(records) < q:
        records.append(virtual_path(user))
    return records


def _edge_weight(lg: LineGraph, v: int, s: int) -> float:
    for succ, w in lg.adj[v]:
        if succ == s:
            return w
    raise KeyError(f"no line-graph edge {v} -> {s}")


def _key_label(key: Key) -> str:
    if key[0] == 0:
        return "S"
    if key[0] == 1:
        return f"{key[1]}-{key[2]}"
    return f"U{key[1]}"


def dump_edge_list(lg: LineGraph) -> str:
    """Plain-text edge list 'src dst weight', one edge per line, for external
    inspection."""
    lines = []
    for v, lst in enumerate(lg.adj):
        for s, w in lst:
            lines.append(f"{_key_label(lg.verts[v])} {_key_label(lg.verts[s])} {w:.12g}")
    return "\n".join(lines) + ("\n" if lines else "")
