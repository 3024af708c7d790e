import random

import pytest

from tgkit.amounts import parse_amount
from tgkit.graph import AddressNode, Edge, TransactionNode, build_graph


def make_address(vid, in_degree=0, out_degree=0, in_value=0, out_value=0,
                 time_range=0, **kw):
    return AddressNode(id=vid, in_degree=in_degree, out_degree=out_degree,
                       in_value=in_value, out_value=out_value,
                       time_range=time_range, **kw)


def make_tx(vid, in_degree=0, out_degree=0, in_value=0, out_value=0,
            in_nodes=(), out_nodes=(), **kw):
    return TransactionNode(id=vid, in_degree=in_degree, out_degree=out_degree,
                           in_value=in_value, out_value=out_value,
                           in_nodes=tuple(in_nodes), out_nodes=tuple(out_nodes),
                           **kw)


@pytest.fixture
def path_graph():
    """n_0 (addr) -> n_1 (tx) -> n_2 (addr)."""
    nodes = [
        make_address("n_0", out_degree=1, out_value=parse_amount("5"),
                     time_range=3600),
        make_tx("n_1", in_degree=1, out_degree=1, in_value=parse_amount("5"),
                out_value=parse_amount("4.9"), in_nodes=("n_0",),
                out_nodes=("n_2",)),
        make_address("n_2", in_degree=1, in_value=parse_amount("4.9"),
                     time_range=0),
    ]
    edges = [Edge("n_0", "n_1", parse_amount("5")),
             Edge("n_1", "n_2", parse_amount("4.9"))]
    return build_graph(nodes, edges, root="n_0", hop_bound=5)


@pytest.fixture
def diamond_graph():
    """n_0 connected to txs n_1 and n_2, both feeding address n_3."""
    nodes = [
        make_address("n_0", out_degree=2, out_value=parse_amount("2")),
        make_tx("n_1", in_degree=1, out_degree=1, in_value=parse_amount("1"),
                out_value=parse_amount("1"), in_nodes=("n_0",), out_nodes=("n_3",)),
        make_tx("n_2", in_degree=1, out_degree=1, in_value=parse_amount("1"),
                out_value=parse_amount("1"), in_nodes=("n_0",), out_nodes=("n_3",)),
        make_address("n_3", in_degree=2, in_value=parse_amount("2"), time_range=60),
    ]
    edges = [Edge("n_0", "n_1"), Edge("n_0", "n_2"),
             Edge("n_1", "n_3"), Edge("n_2", "n_3")]
    return build_graph(nodes, edges, root="n_0", hop_bound=5)


@pytest.fixture
def showcase_graph():
    """Fixture mirroring a condensed real subgraph's headline attributes.

    Transaction n_1 keeps its frozen fan-out of 600 with only two surviving
    out-neighbours, and address n_14 carries the graph's largest in-degree.
    """
    nodes = [
        make_address("n_0", in_degree=3, out_degree=2,
                     in_value=parse_amount("80"), out_value=parse_amount("79.5"),
                     time_range=86400,
                     original_id="bc1qexamplerootaddressxxxxxxxxxxxxxxxxxxxx"),
        make_tx("n_1", in_degree=4, out_degree=600,
                in_value=parse_amount("77.29740945"),
                out_value=parse_amount("77.29452845"),
                in_nodes=("n_0",), out_nodes=("n_13", "n_14")),
        make_tx("n_2", in_degree=3, out_degree=120,
                in_value=parse_amount("27.69691553"),
                out_value=parse_amount("27.69184153"),
                in_nodes=("n_0",), out_nodes=("n_14",)),
        make_address("n_13", in_degree=12, out_degree=9,
                     in_value=parse_amount("3.5"), out_value=parse_amount("3.4"),
                     time_range=7200),
        make_address("n_14", in_degree=198, out_degree=188,
                     in_value=parse_amount("54.1"), out_value=parse_amount("54"),
                     time_range=43200),
    ]
    edges = [Edge("n_0", "n_1"), Edge("n_0", "n_2"),
             Edge("n_1", "n_13"), Edge("n_1", "n_14"), Edge("n_2", "n_14")]
    return build_graph(nodes, edges, root="n_0", hop_bound=5, label="exchange")


@pytest.fixture
def star3_graph():
    """Root plus three leaf transactions with strictly increasing importance."""
    import math

    def coins(x):
        return round(x * 10**8)

    nodes = [
        make_address("n_0", out_degree=3, out_value=coins(100)),
        make_tx("n_1", in_degree=1, in_value=0, out_value=0,
                in_nodes=("n_0",)),
        make_tx("n_2", in_degree=1, in_value=coins(math.e - 1), out_value=0,
                in_nodes=("n_0",)),
        make_tx("n_3", in_degree=1, in_value=coins(math.e**3 - 1), out_value=0,
                in_nodes=("n_0",)),
    ]
    edges = [Edge("n_0", "n_1"), Edge("n_0", "n_2"), Edge("n_0", "n_3")]
    return build_graph(nodes, edges, root="n_0", hop_bound=5)


def relabel_graph(g, seed):
    """Permute non-root node ids; the root keeps n_0 by definition."""
    rng = random.Random(seed)
    others = [v for v in g.nodes if v != "n_0"]
    shuffled = others[:]
    rng.shuffle(shuffled)
    mapping = {"n_0": "n_0", **dict(zip(others, shuffled))}

    nodes = []
    for vid, n in g.nodes.items():
        if isinstance(n, TransactionNode):
            nodes.append(TransactionNode(
                id=mapping[vid], in_degree=n.in_degree, out_degree=n.out_degree,
                in_value=n.in_value, out_value=n.out_value,
                in_nodes=tuple(mapping[a] for a in n.in_nodes),
                out_nodes=tuple(mapping[a] for a in n.out_nodes),
                timestamp=n.timestamp))
        else:
            nodes.append(AddressNode(
                id=mapping[vid], in_degree=n.in_degree, out_degree=n.out_degree,
                in_value=n.in_value, out_value=n.out_value,
                time_range=n.time_range))
    edges = [Edge(mapping[e.src], mapping[e.dst], e.value) for e in g.edges]
    return build_graph(nodes, edges, root="n_0", hop_bound=g.hop_bound)
