"""CETraS: connectivity-enhanced transaction graph sampling.

Each node gets an importance score

    (ln(a_in + a_out + 1) + beta * ln(d_in + d_out + 1)) / (l_s + 1)

where the amounts are coin totals, the degrees are the frozen attributes, and
``l_s`` is the layer (root distance). Nodes are then drawn with probability
proportional to 1/importance — the root gets probability zero — until the
target number of distinct non-root nodes is reached; repeated draws are
no-ops. Every drawn node is reconnected by adding its shortest root path, so
the sampled graph stays connected and keeps the original layer structure.

Draws come from numpy's seeded PCG64 generator, so a (graph, seed, n_target,
beta) tuple always yields the same subgraph.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import amounts
from .errors import InvalidAttribute, SingleNodeGraph
from .graph import (
    TransactionGraph,
    TransactionNode,
    build_graph,
    copy_node,
    node_index,
    shortest_path,
)

_DRAW_BATCH = 256


@dataclass
class SampleConfig:
    n_target: int
    seed: int
    beta: float = 2.0

    def __post_init__(self):
        if self.n_target < 1:
            raise ValueError("n_target must be >= 1")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")


@dataclass
class ImportanceTable:
    scores: dict          # node id -> importance
    probabilities: dict   # node id -> draw probability (root: 0)
    beta: float
    root: str = field(default="n_0")


def node_importance(a_in, a_out, d_in, d_out, l_s, beta) -> float:
    """Importance of one node from its raw attribute numbers."""
    value_term = math.log(a_in + a_out + 1.0)
    degree_term = beta * math.log(d_in + d_out + 1.0)
    return (value_term + degree_term) / (l_s + 1.0)


def importance_table(g: TransactionGraph, beta: float = 2.0) -> ImportanceTable:
    """Scores for every node plus normalized inverse-importance probabilities."""
    if len(g) < 2:
        raise SingleNodeGraph("cannot weight a graph with no non-root nodes")
    scores = {}
    weights = {}
    for vid in g.ordered_ids():
        n = g.nodes[vid]
        score = node_importance(
            amounts.to_coins(n.in_value or 0),
            amounts.to_coins(n.out_value or 0),
            n.in_degree or 0,
            n.out_degree or 0,
            g.layers[vid],
            beta,
        )
        scores[vid] = score
        if vid == g.root:
            continue
        if score <= 0:
            raise InvalidAttribute(
                f"{vid} has zero importance (no value and no degree recorded)")
        weights[vid] = 1.0 / score
    total = sum(weights.values())
    probabilities = {vid: w / total for vid, w in weights.items()}
    probabilities[g.root] = 0.0
    return ImportanceTable(scores=scores, probabilities=probabilities, beta=beta,
                           root=g.root)


def sample(g: TransactionGraph, cfg: SampleConfig) -> TransactionGraph:
    """Condense ``g`` to about ``cfg.n_target`` nodes, keeping root connectivity."""
    table = importance_table(g, cfg.beta)
    ids = [vid for vid in g.ordered_ids() if vid != g.root]
    target = min(cfg.n_target, len(ids))

    cdf = np.cumsum([table.probabilities[vid] for vid in ids])
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    selected = set()
    while len(selected) < target:
        draws = np.minimum(np.searchsorted(cdf, rng.random(_DRAW_BATCH),
                                           side="right"), len(ids) - 1)
        for i in draws:
            selected.add(ids[i])
            if len(selected) >= target:
                break

    directed = {(e.src, e.dst): e for e in g.edges}
    keep_nodes = {g.root}
    keep_edges = []
    seen_edges = set()
    for vid in sorted(selected, key=node_index):
        path = shortest_path(g, vid)
        keep_nodes.update(path)
        for u, v in zip(path, path[1:]):
            for pair in ((u, v), (v, u)):
                if pair in directed and pair not in seen_edges:
                    seen_edges.add(pair)
                    keep_edges.append(directed[pair])

    out_nodes = []
    for vid in keep_nodes:
        n = g.nodes[vid]
        if isinstance(n, TransactionNode):
            n = copy_node(
                n,
                in_nodes=tuple(a for a in n.in_nodes if a in keep_nodes),
                out_nodes=tuple(a for a in n.out_nodes if a in keep_nodes),
            )
        out_nodes.append(n)

    return build_graph(out_nodes, keep_edges, root=g.root,
                       hop_bound=g.hop_bound, label=g.label)
