"""Ground truth for the twelve foundational graph metrics.

Six graph-wide argmax queries (largest in/out degree, in/out value, and
absolute degree/value difference), four per-node attribute lookups, the
address time range, and transaction input/output membership. Argmax queries
return *every* node attaining the maximum so that ties never penalize an
answer naming either node. Absent attributes count as zero.
"""

import json
from dataclasses import dataclass

from . import amounts
from .errors import UnknownNode
from .graph import TransactionGraph, node_index, require_address, require_transaction

GLOBAL_METRICS = ("in_degree", "out_degree", "in_value", "out_value",
                  "diff_degree", "diff_value")
NODE_METRICS = ("in_degree", "out_degree", "in_value", "out_value")


def _metric_value(n, metric: str) -> int:
    if metric == "diff_degree":
        return abs((n.in_degree or 0) - (n.out_degree or 0))
    if metric == "diff_value":
        return abs((n.in_value or 0) - (n.out_value or 0))
    return getattr(n, metric) or 0


def global_argmax(g: TransactionGraph, metric: str) -> set:
    """All nodes (both types) attaining the maximum of the metric."""
    if metric not in GLOBAL_METRICS:
        raise ValueError(f"unknown global metric {metric!r}")
    best = None
    winners = set()
    for vid, n in g.nodes.items():
        v = _metric_value(n, metric)
        if best is None or v > best:
            best = v
            winners = {vid}
        elif v == best:
            winners.add(vid)
    return winners


def node_metric(g: TransactionGraph, v: str, metric: str) -> int:
    """Frozen attribute of one node (degrees as counts, values in satoshis)."""
    if metric not in NODE_METRICS:
        raise ValueError(f"unknown node metric {metric!r}")
    return getattr(g.node(v), metric) or 0


def special_info_address(g: TransactionGraph, v: str) -> int:
    """Seconds between the address's first and last observed transaction."""
    return require_address(g, v).time_range or 0


def special_info_transaction(g: TransactionGraph, tx: str, query: str,
                             direction: str) -> bool:
    """Whether ``query`` appears in the transaction's input/output node set."""
    n = require_transaction(g, tx)
    if direction == "in":
        return query in n.in_nodes
    if direction == "out":
        return query in n.out_nodes
    raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")


@dataclass
class AnswerKey:
    """Materialized ground truth for one graph."""

    global_max: dict   # metric -> frozenset of node ids
    node_values: dict  # node id -> {metric: value}
    special_a: dict    # address id -> time range
    special_t: dict    # tx id -> {"in": frozenset, "out": frozenset}

    def argmax(self, metric: str) -> frozenset:
        return self.global_max[metric]

    def value(self, v: str, metric: str):
        try:
            return self.node_values[v][metric]
        except KeyError:
            raise UnknownNode(f"no node {v!r} in answer key") from None

    def time_range(self, v: str) -> int:
        try:
            return self.special_a[v]
        except KeyError:
            raise UnknownNode(f"{v!r} is not an address in the key") from None

    def membership(self, tx: str, query: str, direction: str) -> bool:
        try:
            return query in self.special_t[tx][direction]
        except KeyError:
            raise UnknownNode(f"{tx!r} is not a transaction in the key") from None

    def to_json(self) -> str:
        def render(v, metric):
            return amounts.format_amount(v) if "value" in metric else v

        payload = {
            "global": {m: sorted(ids, key=node_index)
                       for m, ids in self.global_max.items()},
            "nodes": {vid: {m: render(val, m) for m, val in vals.items()}
                      for vid, vals in self.node_values.items()},
            "special_address": dict(self.special_a),
            "special_transaction": {
                tx: {"in": sorted(s["in"], key=node_index),
                     "out": sorted(s["out"], key=node_index)}
                for tx, s in self.special_t.items()},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "AnswerKey":
        payload = json.loads(text)
        node_values = {
            vid: {m: amounts.parse_amount(str(val)) if "value" in m else int(val)
                  for m, val in vals.items()}
            for vid, vals in payload["nodes"].items()}
        return cls(
            global_max={m: frozenset(ids) for m, ids in payload["global"].items()},
            node_values=node_values,
            special_a={v: int(t) for v, t in payload["special_address"].items()},
            special_t={tx: {"in": frozenset(s["in"]), "out": frozenset(s["out"])}
                       for tx, s in payload["special_transaction"].items()},
        )


def answer_key(g: TransactionGraph) -> AnswerKey:
    """Compute every metric family for the graph."""
    return AnswerKey(
        global_max={m: frozenset(global_argmax(g, m)) for m in GLOBAL_METRICS},
        node_values={vid: {m: node_metric(g, vid, m) for m in NODE_METRICS}
                     for vid in g.nodes},
        special_a={vid: special_info_address(g, vid)
                   for vid in g.nodes if g.is_address(vid)},
        special_t={vid: {"in": frozenset(g.node(vid).in_nodes),
                         "out": frozenset(g.node(vid).out_nodes)}
                   for vid in g.nodes if not g.is_address(vid)},
    )
