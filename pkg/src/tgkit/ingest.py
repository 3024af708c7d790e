"""Build a rooted subgraph from exported transaction records.

Records are flat entries (tx id, timestamp, input/output address, amount).
Expansion is an undirected BFS from the root address up to the hop bound,
truncated at a node cap in discovery order; local ids ``n_0, n_1, ...`` follow
discovery order. Node attributes are computed over the *full* record set and
frozen, so a truncated neighbourhood keeps the degrees the records report.
"""

import csv
from collections import deque
from dataclasses import dataclass, field

from . import amounts
from .errors import EmptyInput, FormatError, RootAbsent
from .graph import AddressNode, Edge, TransactionGraph, TransactionNode, build_graph

DEFAULT_NODE_CAP = 3000


@dataclass
class RawTxRecord:
    """One transaction: inputs fund it, outputs receive from it."""

    tx_id: str
    timestamp: int
    inputs: list = field(default_factory=list)   # (address, satoshis)
    outputs: list = field(default_factory=list)  # (address, satoshis)


def read_raw_csv(path) -> list:
    """Load records from delimited text (tx_id, timestamp, side, address, amount)."""
    records = {}
    order = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"tx_id", "timestamp", "side", "address", "amount"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise FormatError(
                f"raw-record file needs columns {sorted(required)}, "
                f"got {reader.fieldnames}")
        for line_no, row in enumerate(reader, start=2):
            tx_id = row["tx_id"]
            if tx_id not in records:
                try:
                    ts = int(row["timestamp"])
                except ValueError:
                    raise FormatError(f"row {line_no}: bad timestamp") from None
                records[tx_id] = RawTxRecord(tx_id=tx_id, timestamp=ts)
                order.append(tx_id)
            try:
                sats = amounts.parse_amount(row["amount"])
            except ValueError:
                raise FormatError(f"row {line_no}: bad amount {row['amount']!r}") from None
            entry = (row["address"], sats)
            if row["side"] == "in":
                records[tx_id].inputs.append(entry)
            elif row["side"] == "out":
                records[tx_id].outputs.append(entry)
            else:
                raise FormatError(f"row {line_no}: side must be 'in' or 'out'")
    return [records[t] for t in order]


def ingest_raw(records, root_address: str, hop_bound: int = 5,
               node_cap: int = DEFAULT_NODE_CAP) -> TransactionGraph:
    """Expand the subgraph around ``root_address`` from raw records."""
    if not records:
        raise EmptyInput("no records to ingest")

    addr_txs = {}   # address -> [tx_id...] in record order
    tx_addrs = {}   # tx_id -> unique addresses, inputs before outputs
    by_id = {}
    for rec in records:
        if not rec.inputs and not rec.outputs:
            raise FormatError(f"transaction {rec.tx_id} has no inputs or outputs")
        if rec.tx_id in by_id:
            raise FormatError(f"duplicate transaction id {rec.tx_id!r}")
        by_id[rec.tx_id] = rec
        uniq = []
        for addr, _ in rec.inputs + rec.outputs:
            if addr not in uniq:
                uniq.append(addr)
                addr_txs.setdefault(addr, []).append(rec.tx_id)
        tx_addrs[rec.tx_id] = uniq

    if root_address not in addr_txs:
        raise RootAbsent(f"root address {root_address!r} appears in no record")

    # BFS discovery; entities are ('a', address) or ('t', tx_id)
    local = {("a", root_address): "n_0"}
    layer = {("a", root_address): 0}
    queue = deque([("a", root_address)])
    discovered = [("a", root_address)]
    while queue:
        ent = queue.popleft()
        if layer[ent] >= hop_bound:
            continue
        kind, key = ent
        nbrs = ([("t", t) for t in addr_txs[key]] if kind == "a"
                else [("a", a) for a in tx_addrs[key]])
        for nbr in nbrs:
            if nbr in local or len(local) >= node_cap:
                continue
            local[nbr] = f"n_{len(local)}"
            layer[nbr] = layer[ent] + 1
            discovered.append(nbr)
            queue.append(nbr)

    kept_addr = {key: local[("a", key)] for kind, key in discovered if kind == "a"}

    nodes = []
    edges = []
    for kind, key in discovered:
        if kind == "a":
            nodes.append(_address_node(key, local[("a", key)], addr_txs[key], by_id))
        else:
            node, tx_edges = _transaction_node(by_id[key], local[("t", key)], kept_addr)
            nodes.append(node)
            edges.extend(tx_edges)

    return build_graph(nodes, edges, root="n_0", hop_bound=hop_bound)


def _address_node(addr, local_id, tx_ids, by_id) -> AddressNode:
    in_deg = out_deg = 0
    in_val = out_val = 0
    stamps = []
    for t in tx_ids:
        rec = by_id[t]
        stamps.append(rec.timestamp)
        received = sum(v for a, v in rec.outputs if a == addr)
        spent = sum(v for a, v in rec.inputs if a == addr)
        if any(a == addr for a, _ in rec.outputs):
            in_deg += 1
            in_val += received
        if any(a == addr for a, _ in rec.inputs):
            out_deg += 1
            out_val += spent
    return AddressNode(
        id=local_id, in_degree=in_deg, out_degree=out_deg,
        in_value=in_val, out_value=out_val,
        time_range=max(stamps) - min(stamps), original_id=addr)


def _transaction_node(rec, local_id, kept_addr):
    in_uniq, out_uniq = [], []
    in_sum = {}
    out_sum = {}
    for addr, v in rec.inputs:
        if addr not in in_sum:
            in_uniq.append(addr)
        in_sum[addr] = in_sum.get(addr, 0) + v
    for addr, v in rec.outputs:
        if addr not in out_sum:
            out_uniq.append(addr)
        out_sum[addr] = out_sum.get(addr, 0) + v

    node = TransactionNode(
        id=local_id,
        in_degree=len(in_uniq),
        out_degree=len(out_uniq),
        in_value=sum(in_sum.values()),
        out_value=sum(out_sum.values()),
        in_nodes=tuple(kept_addr[a] for a in in_uniq if a in kept_addr),
        out_nodes=tuple(kept_addr[a] for a in out_uniq if a in kept_addr),
        timestamp=rec.timestamp,
        original_id=rec.tx_id,
    )
    edges = [Edge(kept_addr[a], local_id, in_sum[a])
             for a in in_uniq if a in kept_addr]
    edges += [Edge(local_id, kept_addr[a], out_sum[a])
              for a in out_uniq if a in kept_addr]
    return node, edges
