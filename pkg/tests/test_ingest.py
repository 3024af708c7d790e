import pytest

from tgkit.amounts import parse_amount
from tgkit.errors import EmptyInput, FormatError, RootAbsent
from tgkit.graph import layer_of
from tgkit.ingest import RawTxRecord, ingest_raw, read_raw_csv


def rec(tx_id, ts, inputs=(), outputs=()):
    return RawTxRecord(
        tx_id=tx_id, timestamp=ts,
        inputs=[(a, parse_amount(v)) for a, v in inputs],
        outputs=[(a, parse_amount(v)) for a, v in outputs])


def test_single_payment_to_root():
    records = [rec("tx1", 1000, inputs=[("funder", "1")], outputs=[("root", "0.99")])]
    g = ingest_raw(records, "root")
    assert len(g) == 3
    assert g.nodes["n_0"].original_id == "root"
    assert layer_of(g, "n_0") == 0
    tx = g.nodes["n_1"]
    assert tx.kind == "transaction"
    assert tx.original_id == "tx1"
    assert layer_of(g, "n_1") == 1
    assert g.nodes["n_2"].original_id == "funder"
    assert layer_of(g, "n_2") == 2
    assert tx.in_nodes == ("n_2",)
    assert tx.out_nodes == ("n_0",)
    assert g.nodes["n_0"].in_value == parse_amount("0.99")
    assert g.nodes["n_0"].in_degree == 1
    assert g.nodes["n_0"].out_degree == 0


def test_node_cap_floor_keeps_only_root():
    records = [rec("tx1", 1000, inputs=[("funder", "1")], outputs=[("root", "1")])]
    g = ingest_raw(records, "root", node_cap=1)
    assert len(g) == 1
    assert list(g.nodes) == ["n_0"]


def test_root_absent():
    records = [rec("tx1", 1000, inputs=[("a", "1")], outputs=[("b", "1")])]
    with pytest.raises(RootAbsent):
        ingest_raw(records, "root")


def test_empty_input():
    with pytest.raises(EmptyInput):
        ingest_raw([], "root")


def test_hop_bound_truncates():
    # chain: a0 -tx1-> a1 -tx2-> a2 ; from a0, a2 is 4 hops away
    records = [
        rec("tx1", 1, inputs=[("a0", "1")], outputs=[("a1", "1")]),
        rec("tx2", 2, inputs=[("a1", "1")], outputs=[("a2", "1")]),
    ]
    g = ingest_raw(records, "a0", hop_bound=2)
    originals = {n.original_id for n in g.nodes.values()}
    assert originals == {"a0", "tx1", "a1"}
    # frozen attributes still reflect the full records
    a1 = next(n for n in g.nodes.values() if n.original_id == "a1")
    assert a1.out_degree == 1 and a1.in_degree == 1


def test_degrees_and_values_recounted_from_records():
    """Independent recount over the record list matches the frozen attributes."""
    records = [
        rec("tx1", 100, inputs=[("x", "2"), ("y", "3")], outputs=[("root", "4.5")]),
        rec("tx2", 250, inputs=[("root", "4.5")], outputs=[("x", "2"), ("z", "2.4")]),
        rec("tx3", 400, inputs=[("z", "1")], outputs=[("root", "0.9")]),
    ]
    g = ingest_raw(records, "root")
    by_orig = {n.original_id: n for n in g.nodes.values()}

    # root: paid by tx1 and tx3, spends in tx2
    root = by_orig["root"]
    assert root.in_degree == sum(
        1 for r in records if any(a == "root" for a, _ in r.outputs))
    assert root.out_degree == sum(
        1 for r in records if any(a == "root" for a, _ in r.inputs))
    assert root.in_value == parse_amount("4.5") + parse_amount("0.9")
    assert root.out_value == parse_amount("4.5")
    assert root.time_range == 400 - 100

    tx2 = by_orig["tx2"]
    assert tx2.in_degree == 1 and tx2.out_degree == 2
    assert tx2.in_value == parse_amount("4.5")
    assert tx2.out_value == parse_amount("4.4")
    assert tx2.timestamp == 250

    x = by_orig["x"]
    assert x.in_degree == 1 and x.out_degree == 1
    assert x.time_range == 250 - 100


def test_duplicate_entries_merge_into_one_edge():
    records = [rec("tx1", 10, inputs=[("a", "1"), ("a", "2")],
                   outputs=[("root", "2.9")]),
               rec("tx2", 11, inputs=[("root", "1")], outputs=[("a", "0.5")])]
    g = ingest_raw(records, "root")
    tx1 = next(n for n in g.nodes.values() if n.original_id == "tx1")
    assert tx1.in_degree == 1          # unique funding addresses
    assert tx1.in_value == parse_amount("3")
    a_local = tx1.in_nodes[0]
    edge = next(e for e in g.edges if e.dst == tx1.id and e.src == a_local)
    assert edge.value == parse_amount("3")


def test_local_ids_follow_discovery_order():
    records = [
        rec("tx1", 1, inputs=[("b", "1")], outputs=[("root", "1")]),
        rec("tx2", 2, inputs=[("c", "1")], outputs=[("root", "1")]),
    ]
    g = ingest_raw(records, "root")
    assert [g.nodes[f"n_{i}"].original_id for i in range(5)] == \
        ["root", "tx1", "tx2", "b", "c"]


def test_ingest_deterministic():
    records = [
        rec("tx1", 1, inputs=[("b", "1")], outputs=[("root", "1")]),
        rec("tx2", 2, inputs=[("root", "0.5")], outputs=[("c", "0.5")]),
    ]
    a = ingest_raw(records, "root")
    b = ingest_raw(records, "root")
    from tgkit.graph import graphs_equal

    assert graphs_equal(a, b)
    assert list(a.nodes) == list(b.nodes)


# ---------------------------------------------------------------------------
# CSV loader


def test_read_raw_csv(tmp_path):
    path = tmp_path / "records.csv"
    path.write_text(
        "tx_id,timestamp,side,address,amount\n"
        "tx1,1000,in,funder,1\n"
        "tx1,1000,out,root,0.99\n"
        "tx2,2000,in,root,0.5\n"
        "tx2,2000,out,shop,0.49\n",
        encoding="utf-8")
    records = read_raw_csv(path)
    assert [r.tx_id for r in records] == ["tx1", "tx2"]
    assert records[0].outputs == [("root", parse_amount("0.99"))]
    g = ingest_raw(records, "root")
    assert len(g) == 5


def test_read_raw_csv_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n", encoding="utf-8")
    with pytest.raises(FormatError):
        read_raw_csv(path)


def test_read_raw_csv_bad_side(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("tx_id,timestamp,side,address,amount\n"
                    "tx1,1,sideways,a,1\n", encoding="utf-8")
    with pytest.raises(FormatError):
        read_raw_csv(path)
