"""Shared test utilities: synthetic line graphs and exhaustive path oracles."""

import numpy as np

from irs_routing.graphs import LineGraph


def random_line_dag(seed: int, max_n: int = 12, edge_prob: float = 0.45) -> LineGraph:
    """Random DAG in line-graph form: index order is topological, weights are
    signed and drawn from a 1e-3 grid so exact cost ties actually occur."""
    rng = np.random.default_rng((7, int(seed)))
    n = int(rng.integers(4, max_n + 1))
    verts = [(0,)] + [(1, 0, v) for v in range(1, n - 1)] + [(2, 0)]
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for a in range(n - 1):
        for b in range(a + 1, n):
            if rng.random() < edge_prob:
                w = float(np.round(rng.uniform(-5.0, 5.0), 3))
                adj[a].append((b, w))
    return LineGraph(
        verts=verts,
        index={k: i for i, k in enumerate(verts)},
        adj=adj,
        topo=list(range(n)),
        source=0,
        terminals={0: n - 1},
    )


def enumerate_all_paths(lg: LineGraph, target: int) -> list[tuple[float, tuple[int, ...]]]:
    """Every source -> target path with its cost (left-to-right accumulation)."""
    out: list[tuple[float, tuple[int, ...]]] = []

    def dfs(v: int, cost: float, path: tuple[int, ...]) -> None:
        if v == target:
            out.append((cost, path))
            return
        for s, w in lg.adj[v]:
            dfs(s, cost + w, path + (s,))

    dfs(lg.source, 0.0, (lg.source,))
    return out


def rank_paths(paths: list[tuple[float, tuple[int, ...]]]) -> list[tuple[float, tuple[int, ...]]]:
    """Sort by cost then path, with costs snapped to the weight grid so float
    association noise cannot reorder exact ties."""
    return sorted(paths, key=lambda cp: (round(cp[0], 6), cp[1]))
