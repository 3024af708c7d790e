"""Manifest-driven evaluation runs.

A run manifest (JSON) names the endpoint, the dataset graphs, the level, and
the seed; paths inside it are relative to the manifest file. Runs are
resumable: graph ids already present in the records file are skipped, and a
query failure is logged to stderr without being recorded, so the next run
retries it. Records land in dataset order regardless of query parallelism.
"""

import json
import os
import sys
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .. import tokenmeter
from ..errors import HarnessError, ManifestError, NoParsableLabels, TgkitError
from ..features import compute_features
from ..formats import read_standard
from ..graph import canonical_category
from ..llm4tg import parse_llm4tg, serialize_llm4tg
from ..oracle import answer_key
from . import grading, prompts
from .client import EndpointClient, ModelEndpoint
from .metrics import classification_metrics
from .records import (
    EvalRecord,
    RecordWriter,
    load_annotations,
    load_records,
    quality_distribution,
    recorded_graph_ids,
)


@dataclass
class RunManifest:
    level: int
    seed: int
    endpoint: ModelEndpoint
    dataset: list
    records_out: str
    summary_out: Optional[str] = None
    references: list = field(default_factory=list)
    reference_labels: dict = field(default_factory=dict)
    truth_labels: dict = field(default_factory=dict)
    annotations: Optional[str] = None
    mode: str = "raw"
    budget_model: Optional[str] = None
    base_dir: Path = field(default_factory=Path)


def load_manifest(path) -> RunManifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from None

    def need(key, types):
        if key not in raw:
            raise ManifestError(f"manifest is missing {key!r}")
        if not isinstance(raw[key], types):
            raise ManifestError(f"manifest field {key!r} has the wrong type")
        return raw[key]

    level = need("level", int)
    if level not in (1, 2, 3):
        raise ManifestError("level must be 1, 2, or 3")
    seed = need("seed", int)
    dataset = need("dataset", list)
    if not dataset:
        raise ManifestError("dataset is empty")
    endpoint_cfg = need("endpoint", dict)
    try:
        endpoint = ModelEndpoint(**endpoint_cfg)
    except (TypeError, ValueError) as exc:
        raise ManifestError(f"bad endpoint config: {exc}") from None
    mode = raw.get("mode", "raw")
    if mode not in ("raw", "features"):
        raise ManifestError("mode must be 'raw' or 'features'")
    if level >= 2 and not raw.get("references"):
        raise ManifestError(f"level {level} needs reference graphs")
    labels = {}
    for key, value in raw.get("reference_labels", {}).items():
        labels[key] = canonical_category(value)
    truths = {k: canonical_category(v)
              for k, v in raw.get("truth_labels", {}).items()}
    if level == 3:
        missing = [Path(p).stem for p in raw["references"]
                   if Path(p).stem not in labels]
        if missing:
            raise ManifestError(f"references lack labels: {missing}")

    base = path.parent
    if endpoint.is_mock:
        endpoint.base_url = "mock://" + str(base / endpoint.base_url[len("mock://"):])
    return RunManifest(
        level=level,
        seed=seed,
        endpoint=endpoint,
        dataset=[str(base / p) for p in dataset],
        records_out=str(base / need("records_out", str)),
        summary_out=str(base / raw["summary_out"]) if raw.get("summary_out") else None,
        references=[str(base / p) for p in raw.get("references", [])],
        reference_labels=labels,
        truth_labels=truths,
        annotations=str(base / raw["annotations"]) if raw.get("annotations") else None,
        mode=mode,
        budget_model=raw.get("budget_model"),
        base_dir=base,
    )


def load_graph_file(path):
    ext = Path(path).suffix.lstrip(".").lower()
    if ext == "tg":
        return parse_llm4tg(Path(path).read_text(encoding="utf-8"))
    if ext in ("graphml", "gexf", "gml"):
        return read_standard(path, ext)
    raise ManifestError(f"cannot infer graph format from {path!r}")


def _graph_seed(seed: int, graph_id: str) -> int:
    return seed ^ zlib.crc32(graph_id.encode("utf-8"))


@dataclass
class RunResult:
    written: int
    skipped: int
    failed: int
    summary_rows: list
    records_path: str
    summary_path: Optional[str]


def run_evaluation(manifest: RunManifest) -> RunResult:
    budget = (tokenmeter.budget_for(manifest.budget_model)
              if manifest.budget_model else None)
    done = recorded_graph_ids(manifest.records_out)
    pending = [(Path(p).stem, p) for p in manifest.dataset
               if Path(p).stem not in done]
    skipped = len(manifest.dataset) - len(pending)

    refs = _load_references(manifest)

    def evaluate_one(client, graph_id, path):
        g = load_graph_file(path)
        doc = serialize_llm4tg(g)
        if manifest.level == 1:
            questions = prompts.select_questions(g, _graph_seed(manifest.seed,
                                                                graph_id))
            prompt = prompts.build_prompt_level1(doc, questions, budget=budget)
            response = client.query(prompt, tag=graph_id)
            grade = grading.grade_level1(response, answer_key(g), questions)
            return EvalRecord(
                level=1, graph_id=graph_id, model=manifest.endpoint.model,
                prompt=prompt, response=response, parsed=grade.answers,
                grade={"struct_correctness": grade.struct_correctness,
                       "results": grade.results,
                       "correct": grade.correct, "total": grade.total})
        if manifest.level == 2:
            prompt = prompts.build_prompt_level2(refs, doc, budget=budget)
            response = client.query(prompt, tag=graph_id)
            return EvalRecord(level=2, graph_id=graph_id,
                              model=manifest.endpoint.model,
                              prompt=prompt, response=response)
        target = doc if manifest.mode == "raw" else compute_features(g)
        prompt = prompts.build_prompt_level3(refs, target, manifest.mode,
                                             budget=budget)
        response = client.query(prompt, tag=graph_id)
        try:
            parsed = grading.parse_ranked_labels(response)
        except NoParsableLabels:
            parsed = []
        truth = manifest.truth_labels.get(graph_id)
        grade = None
        if truth is not None:
            rank = parsed.index(truth) + 1 if truth in parsed else None
            grade = {"truth": truth, "hit_rank": rank}
        return EvalRecord(level=3, graph_id=graph_id,
                          model=manifest.endpoint.model,
                          prompt=prompt, response=response,
                          parsed=parsed, grade=grade)

    written = failed = 0
    with EndpointClient(manifest.endpoint) as client, \
            RecordWriter(manifest.records_out) as writer:
        with ThreadPoolExecutor(max_workers=manifest.endpoint.parallelism) as pool:
            futures = [(gid, pool.submit(evaluate_one, client, gid, path))
                       for gid, path in pending]
            for gid, future in futures:
                try:
                    writer.write(future.result())
                    written += 1
                except TgkitError as exc:
                    failed += 1
                    print(f"evaluate: {gid}: {type(exc).__name__}: {exc}",
                          file=sys.stderr)

    summary_rows = summarize(manifest)
    if manifest.summary_out:
        _write_atomic(manifest.summary_out, _summary_csv(summary_rows))
    return RunResult(written=written, skipped=skipped, failed=failed,
                     summary_rows=summary_rows,
                     records_path=manifest.records_out,
                     summary_path=manifest.summary_out)


def _load_references(manifest: RunManifest):
    if manifest.level == 1:
        return None
    refs = []
    for path in manifest.references:
        g = load_graph_file(path)
        if manifest.level == 2:
            refs.append(serialize_llm4tg(g))
        else:
            payload = (serialize_llm4tg(g) if manifest.mode == "raw"
                       else compute_features(g))
            refs.append((payload, manifest.reference_labels[Path(path).stem]))
    return refs


# ---------------------------------------------------------------------------
# summaries


def summarize(manifest: RunManifest) -> list:
    """(metric, value...) rows recomputed from the records file."""
    records = [r for r in load_records(manifest.records_out)
               if r.level == manifest.level]
    if manifest.level == 1:
        return _summarize_level1(records)
    if manifest.level == 2:
        return _summarize_level2(manifest, records)
    return _summarize_level3(manifest, records)


def _summarize_level1(records) -> list:
    totals = {}
    struct_ok = 0
    for rec in records:
        struct_ok += bool(rec.grade["struct_correctness"])
        for qid, ok in rec.grade["results"].items():
            family = qid.split("[", 1)[0]
            correct, total = totals.get(family, (0, 0))
            totals[family] = (correct + bool(ok), total + 1)
    rows = [("metric", "correct", "total", "accuracy")]
    n = len(records)
    rows.append(("struct_correctness", struct_ok, n,
                 round(struct_ok / n, 6) if n else 0.0))
    for family in sorted(totals):
        correct, total = totals[family]
        rows.append((family, correct, total, round(correct / total, 6)))
    return rows


def _summarize_level2(manifest, records) -> list:
    rows = [("metric", "value"), ("records", len(records))]
    if manifest.annotations and os.path.exists(manifest.annotations):
        labels = load_annotations(manifest.annotations)
        marked = [labels[r.graph_id] for r in records if r.graph_id in labels]
        for name, value in quality_distribution(marked).items():
            rows.append((name, round(value, 6)))
    return rows


def _summarize_level3(manifest, records) -> list:
    rows = [("metric", "value"), ("records", len(records))]
    graded = [(manifest.truth_labels[r.graph_id], r.parsed or [])
              for r in records if r.graph_id in manifest.truth_labels]
    if graded:
        truths = [t for t, _ in graded]
        preds = [p for _, p in graded]
        m = classification_metrics(truths, preds)
        rows += [
            ("accuracy", round(m.accuracy, 6)),
            ("top3_accuracy", round(m.top3_accuracy, 6)),
            ("macro_precision", round(m.macro_precision, 6)),
            ("macro_recall", round(m.macro_recall, 6)),
            ("macro_f1", round(m.macro_f1, 6)),
        ]
        for cat, score in m.per_category.items():
            rows.append((f"precision[{cat}]", round(score.precision, 6)))
            rows.append((f"recall[{cat}]", round(score.recall, 6)))
            rows.append((f"f1[{cat}]", round(score.f1, 6)))
            rows.append((f"support[{cat}]", score.support))
    return rows


def _summary_csv(rows) -> str:
    return "\n".join(",".join(str(cell) for cell in row) for row in rows) + "\n"


def _write_atomic(path, text) -> None:
    tmp = f"{path}.tmp"
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)
