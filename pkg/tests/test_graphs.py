"""Routing graph construction, shortest paths, and the k-best enumeration."""

import math

import pytest
from helpers import enumerate_all_paths, random_line_dag, rank_paths

from irs_routing.beamforming import route_gain_idealized
from irs_routing.graphs import (
    SOURCE_KEY,
    build_line_graph,
    build_routing_graph,
    dump_edge_list,
    edge_key,
    k_shortest_paths,
    shortest_path,
    user_key,
    vertices_touching,
)
from irs_routing.scene import BS, IRS, USER, Node, Scenario, build_chain_scenario


# ---------------------------------------------------------------------------
# base graph


def test_edges_point_strictly_away_from_the_bs():
    # two panels at the same distance from the BS see each other but get no edge
    scn = Scenario(
        nodes=[
            Node(0, BS, (0.0, 0.0, 2.0), (1.0, 0.0, 0.0)),
            Node(1, IRS, (3.0, -2.0, 2.0), (0.0, 1.0, 0.0)),
            Node(2, IRS, (3.0, 2.0, 2.0), (0.0, -1.0, 0.0)),
            Node(3, USER, (6.0, 0.0, 1.5)),
        ],
        los_threshold=5.0,
    )
    graph = build_routing_graph(scn)
    assert graph.los.is_los(1, 2)
    assert 2 not in graph.successors[1]
    assert 1 not in graph.successors[2]


def test_routing_graph_on_the_bundled_layout(bundled):
    graph = build_routing_graph(bundled)
    # entrances hang off the BS; every edge respects the distance ordering
    assert set(graph.successors[0]) == {
        j for j in bundled.irs_ids if graph.los.is_los(0, j)
    }
    for i, succ in graph.successors.items():
        for j in succ:
            assert graph.los.is_los(i, j)
            if bundled.kind(j) == IRS and i != 0:
                assert bundled.distance(0, j) > bundled.distance(0, i)


# ---------------------------------------------------------------------------
# line graph


def test_line_graph_vertex_count_is_edges_plus_terminals(bundled):
    graph = build_routing_graph(bundled)
    lg = build_line_graph(bundled, graph, "discrete")
    panel_edges = sum(
        1 for i, succ in graph.successors.items() for j in succ if bundled.kind(j) == IRS
    )
    assert len(lg.verts) == 1 + panel_edges + bundled.n_users
    assert lg.verts[lg.source] == SOURCE_KEY
    for u in bundled.user_ids:
        assert lg.verts[lg.terminals[u]] == user_key(u)


def test_line_path_cost_is_minus_log_idealized_gain(bundled):
    graph = build_routing_graph(bundled)
    for mode in ("discrete", "continuous"):
        lg = build_line_graph(bundled, graph, mode)
        for u in bundled.user_ids:
            for rec in k_shortest_paths(lg, u, 3):
                if rec.virtual:
                    continue
                want = -math.log(route_gain_idealized(bundled, rec.route, mode))
                assert rec.cost == pytest.approx(want, rel=1e-9), rec.route


def test_line_path_maps_back_to_the_node_route():
    scn = build_chain_scenario(0, 2)
    graph = build_routing_graph(scn)
    lg = build_line_graph(scn, graph, "discrete")
    path = (
        lg.source,
        lg.index[edge_key(0, 1)],
        lg.index[edge_key(1, 2)],
        lg.index[user_key(3)],
    )
    assert lg.route_of(path) == (0, 1, 2, 3)


def test_vertices_touching_finds_every_reference(bundled):
    graph = build_routing_graph(bundled)
    lg = build_line_graph(bundled, graph, "discrete")
    touched = vertices_touching(lg, {5})
    for idx in range(len(lg.verts)):
        key = lg.verts[idx]
        mentions = (key[0] == 1 and 5 in key[1:]) or (key[0] == 2 and key[1] == 5)
        assert (idx in touched) == mentions


def test_edge_list_dump_is_parseable(bundled):
    graph = build_routing_graph(bundled)
    lg = build_line_graph(bundled, graph, "discrete")
    text = dump_edge_list(lg)
    lines = text.strip().splitlines()
    assert len(lines) == sum(len(a) for a in lg.adj)
    src, dst, w = lines[0].split()
    assert src == "S"
    float(w)  # parseable weight
    assert all(len(line.split()) == 3 for line in lines)


# ---------------------------------------------------------------------------
# shortest path


def test_shortest_path_handles_negative_weights_exactly():
    for seed in range(40):
        lg = random_line_dag(seed)
        target = lg.terminals[0]
        want = rank_paths(enumerate_all_paths(lg, target))
        got = shortest_path(lg, target)
        if not want:
            assert got is None
            continue
        assert got is not None
        assert got[1] == want[0][1]
        assert got[0] == pytest.approx(want[0][0], abs=1e-9)


def test_shortest_path_breaks_ties_lexicographically():
    lg = random_line_dag(0)
    # two parallel edges with identical cost: source -> a -> t and source -> b -> t
    lg.adj[0] = [(1, 1.0), (2, 1.0)]
    t = lg.terminals[0]
    lg.adj[1] = [(t, 1.0)]
    lg.adj[2] = [(t, 1.0)]
    for v in range(3, t):
        lg.adj[v] = []
    cost, path = shortest_path(lg, t)
    assert path == (0, 1, t)
    assert cost == pytest.approx(2.0)


def test_shortest_path_respects_blocks():
    lg = random_line_dag(1)
    t = lg.terminals[0]
    base = shortest_path(lg, t)
    assert base is not None
    mid = base[1][1]
    detour = shortest_path(lg, t, blocked_vertices={mid})
    if detour is not None:
        assert mid not in detour[1]
        assert detour[0] >= base[0] - 1e-9
    first_edge = (base[1][0], base[1][1])
    detour2 = shortest_path(lg, t, blocked_edges={first_edge})
    if detour2 is not None:
        assert detour2[1][:2] != base[1][:2]


def test_same_source_and_target_is_an_error():
    lg = random_line_dag(2)
    with pytest.raises(ValueError, match="must differ"):
        shortest_path(lg, lg.source)


# ---------------------------------------------------------------------------
# k shortest paths


@pytest.mark.parametrize("seed", range(25))
def test_k_best_matches_exhaustive_ranking(seed):
    lg = random_line_dag(seed)
    want = rank_paths(enumerate_all_paths(lg, lg.terminals[0]))
    q = 5
    records = k_shortest_paths(lg, 0, q)
    assert len(records) == q
    real = [r for r in records if not r.virtual]
    assert len(real) == min(q, len(want))
    for rec, (wc, wp) in zip(real, want):
        assert rec.line_path == wp
        assert rec.cost == pytest.approx(wc, abs=1e-9)
    # distinct paths only
    assert len({r.line_path for r in real}) == len(real)


def test_k_best_pads_with_unreachable_placeholders():
    scn = build_chain_scenario(0, 1)  # single possible route
    graph = build_routing_graph(scn)
    lg = build_line_graph(scn, graph, "discrete")
    user = scn.user_ids[0]
    records = k_shortest_paths(lg, user, 4)
    assert [r.virtual for r in records] == [False, True, True, True]
    assert records[0].route == (0, 1, user)
    assert records[1].cost == math.inf
    assert records[1].route == (0, user)


def test_costs_come_out_sorted(bundled):
    graph = build_routing_graph(bundled)
    lg = build_line_graph(bundled, graph, "discrete")
    for u in bundled.user_ids:
        recs = k_shortest_paths(lg, u, 6)
        costs = [r.cost for r in recs]
        assert costs == sorted(costs)


def test_benchmark_weightings_change_the_ranking(bundled):
    graph = build_routing_graph(bundled)
    plain = build_line_graph(bundled, graph, "discrete")
    pathloss = build_line_graph(bundled, graph, "discrete", unit_amplitude=True)
    beam = build_line_graph(bundled, graph, "discrete", beam_only=True)
    u = bundled.user_ids[0]
    full = k_shortest_paths(plain, u, 1)[0]
    short = k_shortest_paths(pathloss, u, 1)[0]
    big = k_shortest_paths(beam, u, 1)[0]
    # pure path loss favors few hops; pure beam gain favors many reflections
    assert len(short.route) <= len(full.route)
    assert len(big.route) >= len(full.route)
