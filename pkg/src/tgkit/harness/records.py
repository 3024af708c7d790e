"""Evaluation records and their line-delimited JSON persistence.

Records append one JSON object per line with a fixed key order, so reruns are
byte-stable apart from timestamps. Characteristic-overview quality labels are
human judgements; they live in a sidecar file keyed by graph id and the
harness only tallies their distribution.
"""

import json
import os
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

QUALITY_LABELS = ("high", "average-flawed", "average-irrelevant", "low")


@dataclass
class EvalRecord:
    level: int
    graph_id: str
    model: str
    prompt: str
    response: str
    parsed: Optional[object] = None   # level-dependent parsed answer
    grade: Optional[object] = None    # level-dependent grade payload
    timestamp: float = field(default_factory=time.time)

    def to_json_line(self) -> str:
        data = asdict(self)
        return json.dumps(data, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json_line(cls, line: str) -> "EvalRecord":
        return cls(**json.loads(line))


def load_records(path) -> list:
    if not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as fh:
        return [EvalRecord.from_json_line(line) for line in fh if line.strip()]


def recorded_graph_ids(path) -> set:
    return {rec.graph_id for rec in load_records(path)}


class RecordWriter:
    """Append-only writer; each record hits disk before the next is handled."""

    def __init__(self, path):
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        self._fh = open(path, "a", encoding="utf-8")

    def write(self, record: EvalRecord) -> None:
        self._fh.write(record.to_json_line() + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# ---------------------------------------------------------------------------
# level-2 annotation sidecar


def load_annotations(path) -> dict:
    """Human quality labels, graph id -> label."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    out = {}
    for graph_id, label in raw.items():
        if label not in QUALITY_LABELS:
            raise ValueError(
                f"annotation for {graph_id!r} must be one of {QUALITY_LABELS}")
        out[graph_id] = label
    return out


def quality_distribution(labels) -> dict:
    """Fractions per quality label plus the aggregate rows."""
    labels = list(labels)
    n = len(labels)
    counts = {lab: labels.count(lab) for lab in QUALITY_LABELS}
    if n == 0:
        return {lab: 0.0 for lab in QUALITY_LABELS} | {
            "average-total": 0.0, "meaningful": 0.0}
    dist = {lab: counts[lab] / n for lab in QUALITY_LABELS}
    dist["average-total"] = dist["average-flawed"] + dist["average-irrelevant"]
    dist["meaningful"] = dist["high"] + dist["average-flawed"]
    return dist
