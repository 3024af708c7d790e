"""GraphML / GEXF / GML serialization.

All three formats carry the same schema: node attributes named exactly as the
LLM4TG keys plus ``type`` (address|transaction), adjacency lists as
comma-joined id strings, amounts as exact decimal strings, and an optional
``value`` per edge plus ``timestamp`` per transaction (the two fields LLM4TG
drops). Output is deterministic so token counts are stable.
"""

import io
from xml.etree.ElementTree import ParseError

import networkx as nx

from . import amounts
from .errors import FormatError, MissingAttribute
from .graph import (
    AddressNode,
    Edge,
    TransactionGraph,
    TransactionNode,
    build_graph,
    node_index,
)

STANDARD_FORMATS = ("graphml", "gexf", "gml")

_GEXF_DATE = 'lastmodifieddate="1970-01-01"'


def write_standard(g: TransactionGraph, fmt: str) -> str:
    """Render the graph in one of the standard formats (deterministic text)."""
    nxg = _to_networkx(g)
    if fmt == "graphml":
        return "\n".join(nx.generate_graphml(nxg)) + "\n"
    if fmt == "gexf":
        lines = []
        for line in nx.generate_gexf(nxg):
            if "lastmodifieddate=" in line:
                line = _fix_gexf_meta(line)
            elif "<creator>" in line:
                line = "    <creator>tgkit</creator>"
            lines.append(line)
        return "\n".join(lines) + "\n"
    if fmt == "gml":
        return "\n".join(nx.generate_gml(nxg)) + "\n"
    raise FormatError(f"unknown format {fmt!r}; expected one of {STANDARD_FORMATS}")


def _fix_gexf_meta(line: str) -> str:
    start = line.index("lastmodifieddate=")
    end = line.index('"', line.index('"', start) + 1) + 1
    return line[:start] + _GEXF_DATE + line[end:]


def read_standard(path, fmt: str) -> TransactionGraph:
    """Parse a standard-format file into a validated graph."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_standard(fh.read(), fmt)


def parse_standard(text: str, fmt: str) -> TransactionGraph:
    try:
        if fmt == "graphml":
            nxg = nx.parse_graphml(text)
        elif fmt == "gexf":
            nxg = nx.read_gexf(io.BytesIO(text.encode("utf-8")))
        elif fmt == "gml":
            nxg = nx.parse_gml(text, label="label")
        else:
            raise FormatError(
                f"unknown format {fmt!r}; expected one of {STANDARD_FORMATS}")
    except FormatError:
        raise
    except (nx.NetworkXError, ParseError, ValueError) as exc:
        raise FormatError(f"unreadable {fmt} document: {exc}") from None
    return _from_networkx(nxg)


def _to_networkx(g: TransactionGraph) -> "nx.DiGraph":
    nxg = nx.DiGraph()
    for vid in g.ordered_ids():
        n = g.nodes[vid]
        attrs = {"type": n.kind}
        for key in ("in_degree", "out_degree"):
            if getattr(n, key) is not None:
                attrs[key] = getattr(n, key)
        for key in ("in_value", "out_value"):
            if getattr(n, key) is not None:
                attrs[key] = amounts.format_amount(getattr(n, key))
        if isinstance(n, AddressNode):
            if n.time_range is not None:
                attrs["time_range"] = n.time_range
        else:
            attrs["in_nodes"] = ",".join(n.in_nodes)
            attrs["out_nodes"] = ",".join(n.out_nodes)
            if n.timestamp is not None:
                attrs["timestamp"] = n.timestamp
        nxg.add_node(vid, **attrs)
    for e in sorted(g.edges, key=lambda e: (node_index(e.src), node_index(e.dst))):
        if e.value is not None:
            nxg.add_edge(e.src, e.dst, value=amounts.format_amount(e.value))
        else:
            nxg.add_edge(e.src, e.dst)
    return nxg


def _from_networkx(nxg) -> TransactionGraph:
    if not nxg.is_directed():
        nxg = nxg.to_directed()
    nodes = []
    for vid, attrs in nxg.nodes(data=True):
        vid = str(vid)
        kind = attrs.get("type")
        if kind not in ("address", "transaction"):
            raise MissingAttribute(f"node {vid} lacks a valid 'type' attribute")
        common = dict(
            in_degree=_opt_int(attrs, "in_degree", vid),
            out_degree=_opt_int(attrs, "out_degree", vid),
            in_value=_opt_amount(attrs, "in_value", vid),
            out_value=_opt_amount(attrs, "out_value", vid),
        )
        if kind == "address":
            nodes.append(AddressNode(
                id=vid, time_range=_opt_int(attrs, "time_range", vid), **common))
        else:
            nodes.append(TransactionNode(
                id=vid,
                in_nodes=_split_ids(attrs.get("in_nodes", "")),
                out_nodes=_split_ids(attrs.get("out_nodes", "")),
                timestamp=_opt_int(attrs, "timestamp", vid),
                **common))
    edges = [
        Edge(str(u), str(v),
             None if "value" not in d else amounts.parse_amount(str(d["value"])))
        for u, v, d in nxg.edges(data=True)
    ]
    if not any(n.id == "n_0" for n in nodes):
        raise FormatError("document does not define the root node n_0")
    hop_bound = max(1, len(nodes))  # tightened below by the BFS layer index
    g = build_graph(nodes, edges, root="n_0", hop_bound=hop_bound)
    g.hop_bound = g.max_layer()
    return g


def _opt_int(attrs, key, vid):
    if key not in attrs:
        return None
    try:
        return int(attrs[key])
    except (TypeError, ValueError):
        raise FormatError(f"node {vid}: attribute {key} is not an integer") from None


def _opt_amount(attrs, key, vid):
    if key not in attrs:
        return None
    try:
        return amounts.parse_amount(str(attrs[key]))
    except ValueError:
        raise FormatError(f"node {vid}: attribute {key} is not an amount") from None


def _split_ids(text) -> tuple:
    text = str(text)
    if not text:
        return ()
    return tuple(part.strip() for part in text.split(","))
