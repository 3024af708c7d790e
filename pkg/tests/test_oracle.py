import pytest

from tgkit.amounts import parse_amount
from tgkit.errors import UnknownNode, WrongNodeType
from tgkit.llm4tg import parse_llm4tg, serialize_llm4tg
from tgkit.oracle import (
    GLOBAL_METRICS,
    AnswerKey,
    answer_key,
    global_argmax,
    node_metric,
    special_info_address,
    special_info_transaction,
)
from tgkit.synthetic import random_graph

from conftest import make_address, make_tx


def test_showcase_argmax_in_degree(showcase_graph):
    assert global_argmax(showcase_graph, "in_degree") == {"n_14"}
    assert global_argmax(showcase_graph, "out_degree") == {"n_1"}


def test_single_node_graph_argmax():
    g = random_graph(seed=0, n_nodes=1)
    for metric in GLOBAL_METRICS:
        assert global_argmax(g, metric) == {"n_0"}


def test_ties_return_all_winners():
    from tgkit.graph import Edge, build_graph

    nodes = [
        make_address("n_0", out_degree=5, out_value=parse_amount("1")),
        make_tx("n_1", in_degree=1, out_degree=5, in_nodes=("n_0",)),
    ]
    g = build_graph(nodes, [Edge("n_0", "n_1")], root="n_0")
    assert global_argmax(g, "out_degree") == {"n_0", "n_1"}


def test_node_metric_known_values(showcase_graph):
    assert node_metric(showcase_graph, "n_1", "in_value") == parse_amount("77.29740945")
    assert node_metric(showcase_graph, "n_14", "in_degree") == 198


def test_node_metric_isolated_root():
    g = random_graph(seed=0, n_nodes=1)
    node = g.nodes["n_0"]
    node.in_degree = node.out_degree = node.in_value = node.out_value = 0
    for metric in ("in_degree", "out_degree", "in_value", "out_value"):
        assert node_metric(g, "n_0", metric) == 0


def test_node_metric_unknown_node(path_graph):
    with pytest.raises(UnknownNode):
        node_metric(path_graph, "n_42", "in_degree")


def test_special_info_address(path_graph):
    assert special_info_address(path_graph, "n_0") == 3600
    assert special_info_address(path_graph, "n_2") == 0
    with pytest.raises(WrongNodeType):
        special_info_address(path_graph, "n_1")


def test_special_info_transaction(path_graph):
    assert special_info_transaction(path_graph, "n_1", "n_0", "in") is True
    assert special_info_transaction(path_graph, "n_1", "n_0", "out") is False
    assert special_info_transaction(path_graph, "n_1", "n_42", "in") is False
    with pytest.raises(WrongNodeType):
        special_info_transaction(path_graph, "n_0", "n_1", "in")
    with pytest.raises(UnknownNode):
        special_info_transaction(path_graph, "n_42", "n_0", "in")
    with pytest.raises(ValueError):
        special_info_transaction(path_graph, "n_1", "n_0", "sideways")


def test_answer_key_materializes_everything(showcase_graph):
    key = answer_key(showcase_graph)
    assert key.argmax("in_degree") == {"n_14"}
    assert key.value("n_1", "out_degree") == 600
    assert key.time_range("n_0") == 86400
    assert key.membership("n_1", "n_0", "in") is True
    assert key.membership("n_1", "n_0", "out") is False


def test_answer_key_deterministic(showcase_graph):
    a = answer_key(showcase_graph)
    b = answer_key(showcase_graph)
    assert a == b
    assert a.to_json() == b.to_json()


def test_answer_key_json_round_trip(showcase_graph):
    key = answer_key(showcase_graph)
    assert AnswerKey.from_json(key.to_json()) == key


def test_oracle_consistent_across_round_trip(showcase_graph):
    reparsed = parse_llm4tg(serialize_llm4tg(showcase_graph).text)
    assert answer_key(reparsed) == answer_key(showcase_graph)


# ---------------------------------------------------------------------------
# independent exhaustive scans (no shared helpers with the package)


def brute_force_key(g):
    """Recompute all twelve families with plain loops over the node map."""
    def metric_of(n, name):
        if name == "diff_degree":
            return abs((n.in_degree or 0) - (n.out_degree or 0))
        if name == "diff_value":
            return abs((n.in_value or 0) - (n.out_value or 0))
        return getattr(n, name) or 0

    out = {"global": {}, "nodes": {}, "special_a": {}, "special_t": {}}
    for metric in ("in_degree", "out_degree", "in_value", "out_value",
                   "diff_degree", "diff_value"):
        values = {vid: metric_of(n, metric) for vid, n in g.nodes.items()}
        top = max(values.values())
        out["global"][metric] = {vid for vid, v in values.items() if v == top}
    for vid, n in g.nodes.items():
        out["nodes"][vid] = {m: getattr(n, m) or 0
                             for m in ("in_degree", "out_degree",
                                       "in_value", "out_value")}
        if n.kind == "address":
            out["special_a"][vid] = n.time_range or 0
        else:
            out["special_t"][vid] = {"in": set(n.in_nodes), "out": set(n.out_nodes)}
    return out


@pytest.mark.parametrize("seed", range(25))
def test_answer_key_matches_brute_force(seed):
    g = random_graph(seed=seed, n_nodes=5 + seed * 7)
    key = answer_key(g)
    expected = brute_force_key(g)
    for metric, winners in expected["global"].items():
        assert key.argmax(metric) == winners
    for vid, metrics in expected["nodes"].items():
        for m, v in metrics.items():
            assert key.value(vid, m) == v
    assert dict(key.special_a) == expected["special_a"]
    for tx, sets in expected["special_t"].items():
        assert key.special_t[tx]["in"] == frozenset(sets["in"])
        assert key.special_t[tx]["out"] == frozenset(sets["out"])


@pytest.mark.parametrize("seed", range(8))
def test_argmax_membership_property(seed):
    g = random_graph(seed=100 + seed, n_nodes=40)
    key = answer_key(g)
    for metric in GLOBAL_METRICS:
        winners = key.argmax(metric)
        values = []
        for vid, n in g.nodes.items():
            if metric == "diff_degree":
                v = abs((n.in_degree or 0) - (n.out_degree or 0))
            elif metric == "diff_value":
                v = abs((n.in_value or 0) - (n.out_value or 0))
            else:
                v = getattr(n, metric) or 0
            values.append((vid, v))
        top = max(v for _, v in values)
        for vid, v in values:
            assert (vid in winners) == (v == top)
