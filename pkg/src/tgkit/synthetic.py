"""Seeded random transaction graphs for fixtures and demos.

Graphs grow as a random tree from the root (layers alternate address and
transaction by construction) plus extra edges between adjacent layers, which
never change BFS distances. Attributes are generated consistently with the
adjacency at build time and then behave like any frozen attributes.
"""

import random

from .graph import AddressNode, Edge, TransactionGraph, TransactionNode, build_graph


def random_graph(seed: int, n_nodes: int, hop_bound: int = 5,
                 extra_edge_rate: float = 0.3,
                 max_coins: int = 100,
                 with_timestamps: bool = False,
                 time_range_absent_rate: float = 0.1) -> TransactionGraph:
    """Build a valid random graph with ``n_nodes`` nodes."""
    if n_nodes < 1:
        raise ValueError("need at least the root node")
    rng = random.Random(seed)

    layer = {0: 0}
    parent = {}
    eligible = [0]  # nodes with layer < hop_bound
    for i in range(1, n_nodes):
        p = rng.choice(eligible)
        parent[i] = p
        layer[i] = layer[p] + 1
        if layer[i] < hop_bound:
            eligible.append(i)

    by_layer = {}
    for i, lay in layer.items():
        by_layer.setdefault(lay, []).append(i)

    pairs = set()
    edge_dirs = []  # (src index, dst index)
    for i, p in parent.items():
        a, b = (p, i) if rng.random() < 0.5 else (i, p)
        pairs.add((a, b))
        edge_dirs.append((a, b))
    for _ in range(int(extra_edge_rate * n_nodes)):
        u = rng.randrange(n_nodes)
        nbr_layers = [l for l in (layer[u] - 1, layer[u] + 1) if l in by_layer]
        if not nbr_layers:
            continue
        v = rng.choice(by_layer[rng.choice(nbr_layers)])
        a, b = (u, v) if rng.random() < 0.5 else (v, u)
        if a == b or (a, b) in pairs:
            continue
        pairs.add((a, b))
        edge_dirs.append((a, b))

    in_adj = {i: [] for i in range(n_nodes)}   # sources feeding i
    out_adj = {i: [] for i in range(n_nodes)}  # targets fed by i
    for a, b in edge_dirs:
        out_adj[a].append(b)
        in_adj[b].append(a)

    def coin_amount():
        return rng.randrange(0, max_coins * 10**8)

    nodes = []
    for i in range(n_nodes):
        vid = f"n_{i}"
        common = dict(
            in_degree=len(in_adj[i]),
            out_degree=len(out_adj[i]),
            in_value=coin_amount() if in_adj[i] else 0,
            out_value=coin_amount() if out_adj[i] else 0,
        )
        if layer[i] % 2 == 0:
            tr = None
            if rng.random() >= time_range_absent_rate:
                tr = rng.randrange(0, 10**7)
            nodes.append(AddressNode(id=vid, time_range=tr, **common))
        else:
            nodes.append(TransactionNode(
                id=vid,
                in_nodes=tuple(f"n_{j}" for j in in_adj[i]),
                out_nodes=tuple(f"n_{j}" for j in out_adj[i]),
                timestamp=rng.randrange(1_500_000_000, 1_700_000_000)
                if with_timestamps else None,
                **common))

    edges = []
    for a, b in edge_dirs:
        value = coin_amount() if rng.random() < 0.8 else None
        edges.append(Edge(f"n_{a}", f"n_{b}", value))

    return build_graph(nodes, edges, root="n_0", hop_bound=hop_bound)
