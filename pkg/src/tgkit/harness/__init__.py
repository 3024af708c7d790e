"""Prompt construction, model querying, grading, and evaluation runs."""

from .client import EndpointClient, ModelEndpoint, query
from .grading import (
    Level1Grade,
    grade_level1,
    normalize_category,
    parse_ranked_labels,
)
from .metrics import ClassificationMetrics, classification_metrics
from .prompts import (
    Question,
    build_prompt_level1,
    build_prompt_level2,
    build_prompt_level3,
    select_questions,
)
from .records import (
    EvalRecord,
    RecordWriter,
    load_annotations,
    load_records,
    quality_distribution,
)
from .runner import RunManifest, load_manifest, run_evaluation, summarize

__all__ = [
    "ClassificationMetrics",
    "EndpointClient",
    "EvalRecord",
    "Level1Grade",
    "ModelEndpoint",
    "Question",
    "RecordWriter",
    "RunManifest",
    "build_prompt_level1",
    "build_prompt_level2",
    "build_prompt_level3",
    "classification_metrics",
    "grade_level1",
    "load_annotations",
    "load_manifest",
    "load_records",
    "normalize_category",
    "parse_ranked_labels",
    "quality_distribution",
    "query",
    "run_evaluation",
    "select_questions",
    "summarize",
]
