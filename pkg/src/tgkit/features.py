"""Ten address-behaviour features for feature-based classification.

The catalogue descriptions below are the ones shown to the model in prompts.
Definitions are pinned here because the one-line descriptions underdetermine
the arithmetic; the choices keep every number computable from a subgraph:

- S1-2 / S1-6 use the population standard deviation over all nodes.
- S3 is the Pearson correlation of (source out-degree, target in-degree)
  over directed edges; absent when either side is constant.
- PAIa21-1, PTIa41-2, and CI3a32-2 are computed at the root address.
- S5 is the closeness centrality of the root; S6 the undirected diameter;
  S7 the directed density |E| / (n (n - 1)).

Temporal features need timestamps (from ingestion records or transaction
nodes) and are absent otherwise; absent features are skipped in prompts and
left empty in CSV exports.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import amounts
from .errors import MissingTimestamps
from .graph import TransactionGraph, TransactionNode

FEATURE_LABELS = ("S2-2", "S1-6", "S1-2", "S3", "PAIa21-1", "PTIa41-2",
                  "S6", "S5", "CI3a32-2", "S7")

FEATURE_DESCRIPTIONS = {
    "S2-2": "Maximum out-degree in subgraphs",
    "S1-6": "Standard deviation of in- and out-degree in subgraphs",
    "S1-2": "Standard deviation of in-degree in subgraphs",
    "S3": "Degree correlation of subgraphs",
    "PAIa21-1": ("Ratio of the minimum input token amount of an address node "
                 "to the total input token amount of the address node"),
    "PTIa41-2": "Minimum transaction time interval of an address node",
    "S6": "Longest distance between any two nodes in the subgraph",
    "S5": "Closeness centrality of the subgraph",
    "CI3a32-2": ("Maximum change ratio in in-degree to each transaction time "
                 "interval for the address node in chronological order"),
    "S7": "Density of the subgraph",
}

_FIELD_BY_LABEL = {
    "S2-2": "s2_2", "S1-6": "s1_6", "S1-2": "s1_2", "S3": "s3",
    "PAIa21-1": "paia21_1", "PTIa41-2": "ptia41_2", "S6": "s6", "S5": "s5",
    "CI3a32-2": "ci3a32_2", "S7": "s7",
}


@dataclass
class FeatureVector:
    s2_2: int
    s1_6: float
    s1_2: float
    s3: Optional[float]
    paia21_1: Optional[float]
    ptia41_2: Optional[int]
    s6: int
    s5: float
    ci3a32_2: Optional[float]
    s7: float

    def by_label(self, label: str):
        return getattr(self, _FIELD_BY_LABEL[label])


def compute_features(g: TransactionGraph, records=None,
                     require_temporal: bool = False) -> FeatureVector:
    """Feature vector of one graph; ``records`` supply per-entry amounts/timestamps."""
    in_degs = np.array([n.in_degree or 0 for n in g.nodes.values()], dtype=float)
    out_degs = np.array([n.out_degree or 0 for n in g.nodes.values()], dtype=float)

    ptia, ci3a = _temporal_features(g, records)
    if require_temporal and (ptia is None or ci3a is None):
        raise MissingTimestamps(
            "temporal features need transaction timestamps (ingest the graph "
            "from raw records)")

    n = len(g)
    return FeatureVector(
        s2_2=int(out_degs.max()),
        s1_6=float(np.std(in_degs + out_degs)),
        s1_2=float(np.std(in_degs)),
        s3=_degree_correlation(g),
        paia21_1=_min_input_ratio(g, records),
        ptia41_2=ptia,
        s6=_diameter(g),
        s5=(n - 1) / sum(g.layers.values()) if n > 1 else 0.0,
        ci3a32_2=ci3a,
        s7=len(g.edges) / (n * (n - 1)) if n > 1 else 0.0,
    )


def _degree_correlation(g) -> Optional[float]:
    if not g.edges:
        return None
    src = np.array([g.nodes[e.src].out_degree or 0 for e in g.edges], dtype=float)
    dst = np.array([g.nodes[e.dst].in_degree or 0 for e in g.edges], dtype=float)
    if np.ptp(src) == 0 or np.ptp(dst) == 0:
        return None
    return float(np.corrcoef(src, dst)[0, 1])


def _undirected_adjacency(g) -> dict:
    adj = {vid: [] for vid in g.nodes}
    for e in g.edges:
        adj[e.src].append(e.dst)
        adj[e.dst].append(e.src)
    return adj


def _diameter(g) -> int:
    """Undirected diameter by all-pairs BFS (graphs are capped at 3,000 nodes)."""
    adj = _undirected_adjacency(g)
    best = 0
    for start in g.nodes:
        dist = {start: 0}
        frontier = [start]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in dist:
                        dist[w] = d
                        nxt.append(w)
            frontier = nxt
        best = max(best, d - 1 if d else 0)
    return best


def _root_incoming(g, records):
    """(amount, timestamp, in-degree increment) per transaction paying the root."""
    root_original = g.nodes[g.root].original_id
    rows = []
    if records is not None and root_original is not None:
        for rec in records:
            paid = [v for a, v in rec.outputs if a == root_original]
            if paid:
                rows.append((sum(paid), rec.timestamp, len(paid)))
        return rows
    for e in g.edges:
        if e.dst == g.root:
            tx = g.nodes[e.src]
            rows.append((e.value, tx.timestamp, 1))
    return rows


def _min_input_ratio(g, records) -> Optional[float]:
    rows = _root_incoming(g, records)
    if not rows:
        return 0.0
    amts = [a for a, _, _ in rows]
    if any(a is None for a in amts):
        return None
    total = sum(amts)
    if total == 0:
        return 0.0
    return amounts.to_coins(min(amts)) / amounts.to_coins(total)


def _temporal_features(g, records):
    stamps = sorted(
        n.timestamp for n in g.nodes.values()
        if isinstance(n, TransactionNode) and n.timestamp is not None
        and (g.root in n.in_nodes or g.root in n.out_nodes))
    ptia = None
    if len(stamps) >= 2:
        ptia = min(b - a for a, b in zip(stamps, stamps[1:]))

    incoming = [(ts, inc) for _, ts, inc in _root_incoming(g, records)
                if ts is not None]
    incoming.sort()
    ci3a = None
    if len(incoming) >= 2:
        ci3a = max(inc / max(1, ts2 - ts1)
                   for (ts1, _), (ts2, inc) in zip(incoming, incoming[1:]))
    return ptia, ci3a


# ---------------------------------------------------------------------------
# rendering


def _render(value) -> str:
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def feature_prompt_block(v: FeatureVector, label: Optional[str] = None) -> str:
    """Human-readable feature block; absent features are skipped."""
    lines = []
    for lab in FEATURE_LABELS:
        val = v.by_label(lab)
        if val is None:
            continue
        lines.append(f"{FEATURE_DESCRIPTIONS[lab]}: {_render(val)}")
    if label is not None:
        lines.append(f"category: {label}")
    return "\n".join(lines)


def features_csv(rows) -> str:
    """CSV with one graph per row; ``rows`` is (graph_id, FeatureVector) pairs."""
    lines = ["graph," + ",".join(FEATURE_LABELS)]
    for graph_id, vec in rows:
        cells = [graph_id]
        for lab in FEATURE_LABELS:
            val = vec.by_label(lab)
            cells.append("" if val is None else _render(val))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
