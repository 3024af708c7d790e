"""LLM4TG codec: the layered, token-minimal text rendering of a graph.

The format groups nodes into layers by BFS distance from the root, one node
per line, attributes as key/value pairs inside braces. Transaction nodes carry
their neighbouring addresses inline (``in_nodes``/``out_nodes``), so the
document needs no separate edge section. Per-edge values and transaction
timestamps have no place in the format and are dropped on serialization.

Serialization is canonical: layers ascending, nodes by numeric id, properties
in a fixed order, values as shortest-round-trip decimals, LF line endings.
Parsing accepts the full grammar (properties in any order, flexible spacing)
and reports errors with 1-based line/column positions.
"""

import re
from dataclasses import dataclass

from . import amounts
from .errors import (
    DanglingNodeReference,
    DuplicateNode,
    FormatError,
    InvalidAttribute,
    LayerCountMismatch,
    Llm4tgSyntaxError,
)
from .graph import (
    AddressNode,
    Edge,
    TransactionGraph,
    TransactionNode,
    build_graph,
    node_index,
)

_ADDRESS_PROPS = ("in_degree", "out_degree", "in_value", "out_value", "time_range")
_TX_PROPS = ("in_degree", "out_degree", "in_value", "out_value", "in_nodes", "out_nodes")
_INT_PROPS = frozenset(("in_degree", "out_degree", "time_range"))
_VALUE_PROPS = frozenset(("in_value", "out_value"))
_LIST_PROPS = frozenset(("in_nodes", "out_nodes"))


@dataclass
class Llm4tgDocument:
    """One LLM4TG text plus its layer headers (layer index, count, node type)."""

    text: str
    layer_headers: list
    canonical: bool = False

    def node_ids(self) -> set:
        return {m.group(1) for m in _NODE_ID_SCAN.finditer(self.text)}


_NODE_ID_SCAN = re.compile(r"^(n_\d+) (?:address|transaction)\s*:", re.MULTILINE)


# ---------------------------------------------------------------------------
# serialization


def serialize_llm4tg(g: TransactionGraph) -> Llm4tgDocument:
    """Render a graph as canonical LLM4TG text (byte-deterministic)."""
    by_layer = {}
    for vid in g.nodes:
        by_layer.setdefault(g.layers[vid], []).append(vid)

    lines = []
    headers = []
    for layer in sorted(by_layer):
        ids = sorted(by_layer[layer], key=node_index)
        kind = g.nodes[ids[0]].kind
        headers.append((layer, len(ids), kind))
        lines.append(f"Layer {layer}: {len(ids)} {kind} nodes")
        for vid in ids:
            lines.append(_node_line(g.nodes[vid]))
    return Llm4tgDocument(text="\n".join(lines) + "\n", layer_headers=headers,
                          canonical=True)


def _node_line(n) -> str:
    props = []
    for key in _ADDRESS_PROPS if isinstance(n, AddressNode) else _TX_PROPS:
        if key in _LIST_PROPS:
            ids = getattr(n, key)
            props.append(f"{key}: [{', '.join(ids)}]")
            continue
        v = getattr(n, key)
        if v is None:
            continue
        rendered = amounts.format_amount(v) if key in _VALUE_PROPS else str(v)
        props.append(f"{key}: {rendered}")
    if not props:
        raise InvalidAttribute(f"{n.id} has no serializable properties")
    return f"{n.id} {n.kind}: {{{', '.join(props)}}}"


# ---------------------------------------------------------------------------
# parsing

_HEADER_RE = re.compile(r"^Layer\s+(\d+)\s*:\s*(\d+)\s+(address|transaction)\s+nodes\s*$")
_NODE_START_RE = re.compile(r"^(n_\d+)\s+(address|transaction)\s*:\s*\{")
_PROP_RE = re.compile(
    r"\s*(in_degree|out_degree|in_value|out_value|time_range|in_nodes|out_nodes)"
    r"\s*:\s*(?:\[([^\[\]]*)\]|(\d+(?:\.\d+)?))\s*([,}])"
)
_LIST_ITEM_RE = re.compile(r"^n_\d+$")


def parse_llm4tg(doc) -> TransactionGraph:
    """Parse LLM4TG text into a validated graph.

    Accepts properties in any order and arbitrary horizontal spacing; blank
    lines are ignored. Duplicate properties on one line are rejected. Raises
    :class:`Llm4tgSyntaxError`, :class:`LayerCountMismatch`,
    :class:`DuplicateNode`, or :class:`DanglingNodeReference`; structural
    violations surface as :class:`~tgkit.errors.GraphError` subclasses.
    """
    text = doc.text if isinstance(doc, Llm4tgDocument) else doc

    nodes = {}
    node_lines = {}
    declared_layer = {}
    header = None  # (layer, declared count, kind, line_no)
    headers = []
    seen_layers = {}
    counted = 0

    def close_header():
        if header is not None and counted != header[1]:
            raise LayerCountMismatch(
                f"layer {header[0]} declares {header[1]} nodes but lists {counted}",
                header[3])

    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        m = _HEADER_RE.match(line)
        if m:
            close_header()
            layer, count, kind = int(m.group(1)), int(m.group(2)), m.group(3)
            if layer in seen_layers:
                raise LayerCountMismatch(f"layer {layer} declared twice", line_no)
            seen_layers[layer] = kind
            header = (layer, count, kind, line_no)
            headers.append((layer, count, kind))
            counted = 0
            continue
        if header is None:
            raise Llm4tgSyntaxError("expected a 'Layer N: ...' header", line_no, 1)
        node = _parse_node_line(line, line_no)
        if node.kind != header[2]:
            raise Llm4tgSyntaxError(
                f"{node.kind} node under a {header[2]} layer", line_no, 1)
        if node.id in nodes:
            raise DuplicateNode(f"node {node.id} defined twice", line_no)
        nodes[node.id] = node
        node_lines[node.id] = line_no
        declared_layer[node.id] = header[0]
        counted += 1
    close_header()

    if not nodes:
        raise FormatError("document defines no nodes")
    if "n_0" not in nodes:
        raise FormatError("document does not define the root node n_0")

    for n in nodes.values():
        if isinstance(n, TransactionNode):
            for ref in n.in_nodes + n.out_nodes:
                if ref not in nodes:
                    raise DanglingNodeReference(
                        f"{n.id} references undefined node {ref}", node_lines[n.id])

    edges = _edges_from_adjacency(nodes)
    g = build_graph(nodes.values(), edges, root="n_0",
                    hop_bound=max(declared_layer.values()))
    for vid, layer in declared_layer.items():
        if g.layers[vid] != layer:
            raise LayerCountMismatch(
                f"node {vid} declared in layer {layer} but lies {g.layers[vid]} "
                f"hops from the root", node_lines[vid])
    return g


def _edges_from_adjacency(nodes) -> list:
    edges = []
    for vid in sorted(nodes, key=node_index):
        n = nodes[vid]
        if isinstance(n, TransactionNode):
            edges.extend(Edge(a, vid) for a in n.in_nodes)
            edges.extend(Edge(vid, a) for a in n.out_nodes)
    return edges


def _parse_node_line(line, line_no):
    m = _NODE_START_RE.match(line)
    if not m:
        raise Llm4tgSyntaxError(
            "expected '<node_id> <address|transaction>: {...}'", line_no, 1)
    vid, kind = m.group(1), m.group(2)
    allowed = _ADDRESS_PROPS if kind == "address" else _TX_PROPS
    seen = {}
    pos = m.end()
    while True:
        pm = _PROP_RE.match(line, pos)
        if not pm:
            raise Llm4tgSyntaxError("malformed property", line_no, pos + 1)
        key, list_body, scalar = pm.group(1), pm.group(2), pm.group(3)
        if key not in allowed:
            raise Llm4tgSyntaxError(
                f"property {key} not valid on {kind} nodes", line_no,
                pm.start(1) + 1)
        if key in seen:
            raise Llm4tgSyntaxError(f"duplicate property {key}", line_no,
                                    pm.start(1) + 1)
        if key in _LIST_PROPS:
            if list_body is None:
                raise Llm4tgSyntaxError(f"{key} expects a [...] list", line_no,
                                        pm.start(1) + 1)
            seen[key] = _parse_id_list(list_body, line_no, pm.start(2) + 1)
        else:
            if scalar is None:
                raise Llm4tgSyntaxError(f"{key} expects a number", line_no,
                                        pm.start(1) + 1)
            if key in _INT_PROPS:
                if "." in scalar:
                    raise Llm4tgSyntaxError(f"{key} must be an integer", line_no,
                                            pm.start(3) + 1)
                seen[key] = int(scalar)
            else:
                try:
                    seen[key] = amounts.parse_amount(scalar)
                except ValueError:
                    raise Llm4tgSyntaxError(
                        f"bad amount {scalar!r} (at most 8 decimal places)",
                        line_no, pm.start(3) + 1) from None
        pos = pm.end()
        if pm.group(4) == "}":
            break
    if line[pos:].strip():
        raise Llm4tgSyntaxError("trailing content after '}'", line_no, pos + 1)

    common = dict(
        in_degree=seen.get("in_degree"),
        out_degree=seen.get("out_degree"),
        in_value=seen.get("in_value"),
        out_value=seen.get("out_value"),
    )
    if kind == "address":
        return AddressNode(id=vid, time_range=seen.get("time_range"), **common)
    return TransactionNode(id=vid, in_nodes=seen.get("in_nodes", ()),
                           out_nodes=seen.get("out_nodes", ()), **common)


def _parse_id_list(body, line_no, col):
    if not body.strip():
        return ()
    items = []
    offset = 0
    for chunk in body.split(","):
        item = chunk.strip()
        if not _LIST_ITEM_RE.match(item):
            raise Llm4tgSyntaxError(f"bad node id {item!r} in list", line_no,
                                    col + offset)
        items.append(item)
        offset += len(chunk) + 1
    return tuple(items)
