"""Classification scoring for ranked top-3 predictions.

Macro precision/recall/F1 average over the *full* category set by default;
categories with no support (or no predictions) contribute zero, which is why
macro scores sit well below accuracy when only a few categories appear.
"""

from dataclasses import dataclass

from ..errors import LengthMismatch
from ..graph import CATEGORIES


@dataclass
class CategoryScore:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass
class ClassificationMetrics:
    accuracy: float
    top3_accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_category: dict  # category -> CategoryScore


def classification_metrics(truths, top3_predictions,
                           labels=CATEGORIES) -> ClassificationMetrics:
    """Score ranked predictions; each prediction is an ordered list (may be empty)."""
    if len(truths) != len(top3_predictions):
        raise LengthMismatch(
            f"{len(truths)} truths vs {len(top3_predictions)} predictions")
    if not truths:
        raise LengthMismatch("nothing to score")

    top1 = [p[0] if p else None for p in top3_predictions]
    hits = sum(t == p for t, p in zip(truths, top1))
    top3_hits = sum(t in p for t, p in zip(truths, top3_predictions))

    per_category = {}
    for cat in labels:
        tp = sum(1 for t, p in zip(truths, top1) if t == cat and p == cat)
        fp = sum(1 for t, p in zip(truths, top1) if t != cat and p == cat)
        support = sum(1 for t in truths if t == cat)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / support if support else 0.0
        f1 = (2 * precision * recall / (precision + recall)
              if precision + recall else 0.0)
        per_category[cat] = CategoryScore(precision, recall, f1, support)

    k = len(labels)
    return ClassificationMetrics(
        accuracy=hits / len(truths),
        top3_accuracy=top3_hits / len(truths),
        macro_precision=sum(s.precision for s in per_category.values()) / k,
        macro_recall=sum(s.recall for s in per_category.values()) / k,
        macro_f1=sum(s.f1 for s in per_category.values()) / k,
        per_category=per_category,
    )
