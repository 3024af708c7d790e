"""Rooted, layered, bipartite transaction-subgraph model.

A graph holds one labelled root address (``n_0``) plus the address and
transaction nodes reachable from it. Layers are undirected BFS distances from
the root, so even layers are addresses and odd layers transactions. Node
attributes (degrees, values, time range) are frozen copies of whatever the
source data reported; downstream transforms never recompute them.

Graphs are immutable once built: all query state (layers, BFS parents) is
precomputed in :func:`build_graph`, and callers may share instances across
threads.
"""

import re
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import (
    BipartiteViolation,
    DisconnectedNode,
    DuplicateEdge,
    HopBoundExceeded,
    InvalidAttribute,
    InvalidNodeId,
    RootNotAddress,
    UnknownNode,
    WrongNodeType,
)

CATEGORIES = (
    "blackmail",
    "darknet-market",
    "exchange",
    "gambling",
    "money-laundering",
    "ponzi",
    "pool",
    "tumbler",
)

_NODE_ID_RE = re.compile(r"^n_(0|[1-9]\d*)$")


def node_index(node_id: str) -> int:
    """Numeric part of a local node id (``n_14`` -> 14)."""
    m = _NODE_ID_RE.match(node_id)
    if not m:
        raise InvalidNodeId(f"bad node id {node_id!r}; expected n_<k>")
    return int(m.group(1))


def canonical_category(text: str) -> str:
    """Normalize a category spelling to the closed eight-value set."""
    key = text.strip().lower().replace("_", "-").replace(" ", "-")
    if key in CATEGORIES:
        return key
    raise ValueError(f"unknown category: {text!r}")


@dataclass
class AddressNode:
    """Address node; amounts in satoshis, time_range in seconds."""

    id: str
    in_degree: Optional[int] = None
    out_degree: Optional[int] = None
    in_value: Optional[int] = None
    out_value: Optional[int] = None
    time_range: Optional[int] = None
    original_id: Optional[str] = None

    kind = "address"


@dataclass
class TransactionNode:
    """Transaction node; in_nodes/out_nodes are the funding/receiving addresses."""

    id: str
    in_degree: Optional[int] = None
    out_degree: Optional[int] = None
    in_value: Optional[int] = None
    out_value: Optional[int] = None
    in_nodes: tuple = ()
    out_nodes: tuple = ()
    timestamp: Optional[int] = None
    original_id: Optional[str] = None

    kind = "transaction"


Node = Union[AddressNode, TransactionNode]


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    value: Optional[int] = None


@dataclass
class TransactionGraph:
    root: str
    nodes: dict
    edges: tuple
    hop_bound: int = 5
    label: Optional[str] = None
    # derived, filled in by build_graph
    layers: dict = field(default_factory=dict)
    parents: dict = field(default_factory=dict)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node {node_id!r} in graph") from None

    def is_address(self, node_id: str) -> bool:
        return isinstance(self.node(node_id), AddressNode)

    def ordered_ids(self) -> list:
        """Node ids sorted by (layer, numeric id) — the canonical order."""
        return sorted(self.nodes, key=lambda v: (self.layers[v], node_index(v)))

    def max_layer(self) -> int:
        return max(self.layers.values())


def _undirected_adjacency(node_ids, edges) -> dict:
    adj = {v: [] for v in node_ids}
    for e in edges:
        adj[e.src].append(e.dst)
        adj[e.dst].append(e.src)
    # sorted, deduplicated neighbour lists make BFS discovery deterministic
    return {v: sorted(set(nbrs), key=node_index) for v, nbrs in adj.items()}


def _bfs_layers(root, adjacency) -> "tuple[dict, dict]":
    layers = {root: 0}
    parents = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adjacency[v]:
            if w not in layers:
                layers[w] = layers[v] + 1
                parents[w] = v
                queue.append(w)
    return layers, parents


def build_graph(nodes, edges, root: str, hop_bound: int = 5,
                label: Optional[str] = None) -> TransactionGraph:
    """Validate node/edge lists and return a graph with its layer index.

    Raises :class:`RootNotAddress`, :class:`BipartiteViolation`,
    :class:`DuplicateEdge`, :class:`DisconnectedNode`, :class:`HopBoundExceeded`,
    :class:`UnknownNode`, or :class:`InvalidAttribute` on bad input.
    """
    node_map = {}
    for n in nodes:
        node_index(n.id)  # validates the id shape
        if n.id in node_map:
            raise InvalidNodeId(f"duplicate node id {n.id!r}")
        _check_attributes(n)
        node_map[n.id] = n

    if root not in node_map:
        raise UnknownNode(f"root {root!r} not among nodes")
    if not isinstance(node_map[root], AddressNode):
        raise RootNotAddress(f"root {root!r} is a transaction node")

    seen_pairs = set()
    for e in edges:
        for endpoint in (e.src, e.dst):
            if endpoint not in node_map:
                raise UnknownNode(f"edge endpoint {endpoint!r} not among nodes")
        if isinstance(node_map[e.src], AddressNode) == isinstance(node_map[e.dst], AddressNode):
            raise BipartiteViolation(
                f"edge {e.src}->{e.dst} joins two {node_map[e.src].kind} nodes")
        if (e.src, e.dst) in seen_pairs:
            raise DuplicateEdge(f"duplicate edge {e.src}->{e.dst}")
        seen_pairs.add((e.src, e.dst))
        if e.value is not None and e.value < 0:
            raise InvalidAttribute(f"edge {e.src}->{e.dst} has negative value")

    # transaction adjacency lists must point at known address nodes; they may
    # name more neighbours than the edge list carries (frozen after sampling)
    for n in node_map.values():
        if isinstance(n, TransactionNode):
            for ref in tuple(n.in_nodes) + tuple(n.out_nodes):
                if ref not in node_map:
                    raise UnknownNode(f"{n.id} references unknown node {ref!r}")
                if not isinstance(node_map[ref], AddressNode):
                    raise BipartiteViolation(
                        f"{n.id} lists transaction node {ref!r} as a neighbour")

    adjacency = _undirected_adjacency(node_map, edges)
    layers, parents = _bfs_layers(root, adjacency)
    for v in node_map:
        if v not in layers:
            raise DisconnectedNode(f"node {v!r} unreachable from root")
        if layers[v] > hop_bound:
            raise HopBoundExceeded(
                f"node {v!r} is {layers[v]} hops from root (bound {hop_bound})")

    return TransactionGraph(
        root=root,
        nodes=node_map,
        edges=tuple(edges),
        hop_bound=hop_bound,
        label=label,
        layers=layers,
        parents=parents,
    )


def _check_attributes(n: Node) -> None:
    for name in ("in_degree", "out_degree", "in_value", "out_value"):
        v = getattr(n, name)
        if v is not None and v < 0:
            raise InvalidAttribute(f"{n.id}.{name} is negative")
    if isinstance(n, AddressNode):
        if n.time_range is not None and n.time_range < 0:
            raise InvalidAttribute(f"{n.id}.time_range is negative")
    else:
        n.in_nodes = tuple(n.in_nodes)
        n.out_nodes = tuple(n.out_nodes)


def layer_of(g: TransactionGraph, v: str) -> int:
    """Undirected BFS distance from the root."""
    try:
        return g.layers[v]
    except KeyError:
        raise UnknownNode(f"no node {v!r} in graph") from None


def shortest_path(g: TransactionGraph, v: str) -> list:
    """One minimum-length undirected root->v path.

    Ties are broken by expanding smallest numeric ids first, so the result is
    deterministic for a given graph.
    """
    if v not in g.nodes:
        raise UnknownNode(f"no node {v!r} in graph")
    path = [v]
    while g.parents[path[-1]] is not None:
        path.append(g.parents[path[-1]])
    path.reverse()
    return path


def require_address(g: TransactionGraph, v: str) -> AddressNode:
    n = g.node(v)
    if not isinstance(n, AddressNode):
        raise WrongNodeType(f"{v} is a transaction node")
    return n


def require_transaction(g: TransactionGraph, v: str) -> TransactionNode:
    n = g.node(v)
    if not isinstance(n, TransactionNode):
        raise WrongNodeType(f"{v} is an address node")
    return n


def copy_node(n: Node, **changes) -> Node:
    """Shallow copy with field overrides (attributes stay frozen)."""
    return replace(n, **changes)


def graphs_equal(a: TransactionGraph, b: TransactionGraph, *,
                 compare_edge_values: bool = True,
                 compare_timestamps: bool = True) -> bool:
    """Structural equality on roots, nodes, and edge sets.

    ``hop_bound`` and ``label`` are carried outside serialized documents, so
    they are not compared. The two flags exclude the fields LLM4TG cannot
    represent (per-edge values, transaction timestamps).
    """
    if a.root != b.root or set(a.nodes) != set(b.nodes):
        return False
    for vid, na in a.nodes.items():
        nb = b.nodes[vid]
        if na.kind != nb.kind:
            return False
        for name in ("in_degree", "out_degree", "in_value", "out_value"):
            if getattr(na, name) != getattr(nb, name):
                return False
        if isinstance(na, AddressNode):
            if na.time_range != nb.time_range:
                return False
        else:
            if tuple(na.in_nodes) != tuple(nb.in_nodes):
                return False
            if tuple(na.out_nodes) != tuple(nb.out_nodes):
                return False
            if compare_timestamps and na.timestamp != nb.timestamp:
                return False
    if compare_edge_values:
        return {(e.src, e.dst, e.value) for e in a.edges} == \
               {(e.src, e.dst, e.value) for e in b.edges}
    return {(e.src, e.dst) for e in a.edges} == {(e.src, e.dst) for e in b.edges}
