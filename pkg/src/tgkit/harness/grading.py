"""Response parsing and grading.

Graders are total: any response text yields a grade. A missing or unparseable
answer line marks that question incorrect and flips ``struct_correctness`` to
false; nothing raises on malformed model output. Numeric answers pass at
1e-6 relative tolerance (models echo printed decimals); argmax questions
accept any member of the tie set.
"""

import re
from dataclasses import dataclass, field

from .. import amounts
from ..errors import NoParsableLabels
from ..graph import CATEGORIES
from ..oracle import AnswerKey

REL_TOLERANCE = 1e-6

_NODE_ID_RE = re.compile(r"n_\d+")
_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?")
_TRUE_WORDS = frozenset(("true", "yes"))
_FALSE_WORDS = frozenset(("false", "no"))


@dataclass
class Level1Grade:
    struct_correctness: bool
    results: dict                 # qid -> bool
    answers: dict = field(default_factory=dict)  # qid -> raw answer text

    @property
    def correct(self) -> int:
        return sum(self.results.values())

    @property
    def total(self) -> int:
        return len(self.results)


def extract_answer_lines(response: str, questions) -> dict:
    """First ``qid: value`` line per question, tolerating surrounding prose."""
    answers = {}
    for q in questions:
        m = re.search(rf"^[^\S\n]*{re.escape(q.qid)}[^\S\n]*:[^\S\n]*(.+?)\s*$",
                      response, re.MULTILINE)
        if m:
            answers[q.qid] = m.group(1)
    return answers


def _numbers_match(answer: str, expected: float) -> bool:
    m = _NUMBER_RE.search(answer.replace(",", ""))
    if not m:
        return False
    got = float(m.group())
    if expected == 0:
        return got == 0
    return abs(got - expected) <= REL_TOLERANCE * abs(expected)


def _grade_one(q, answer: str, key: AnswerKey) -> bool:
    if q.kind == "global":
        m = _NODE_ID_RE.search(answer)
        return bool(m) and m.group() in key.argmax(q.metric)
    if q.kind == "node_value":
        raw = key.value(q.node, q.metric)
        if q.metric.endswith("value"):
            return (answer.strip() == amounts.format_amount(raw)
                    or _numbers_match(answer, raw / 10**8))
        return _numbers_match(answer, raw)
    if q.kind == "special_a":
        return _numbers_match(answer, key.time_range(q.node))
    word = answer.strip().lower().rstrip(".")
    if word not in _TRUE_WORDS | _FALSE_WORDS:
        return False
    return (word in _TRUE_WORDS) == key.membership(q.node, q.query, q.direction)


def grade_level1(response: str, key: AnswerKey, questions) -> Level1Grade:
    """Grade one response against the answer key for the asked battery."""
    answers = extract_answer_lines(response or "", questions)
    results = {}
    for q in questions:
        answer = answers.get(q.qid)
        results[q.qid] = answer is not None and _grade_one(q, answer, key)
    return Level1Grade(
        struct_correctness=len(answers) == len(questions),
        results=results,
        answers=answers,
    )


# ---------------------------------------------------------------------------
# level 3: ranked category extraction

_ALIASES = {
    "darknet": "darknet-market",
    "laundering": "money-laundering",
    "mining-pool": "pool",
    "mixer": "tumbler",
    "mixing": "tumbler",
}

_RANKED_LINE_RE = re.compile(r"^\s*category[_\s]*([1-9])\s*[:.)-]\s*(.+?)\s*$",
                             re.IGNORECASE | re.MULTILINE)
_NUMBERED_RE = re.compile(r"\b[1-9]\s*[.):]\s*([A-Za-z][A-Za-z _-]*)")


def normalize_category(text: str):
    """Map a free-form category spelling onto the closed set (None if no match)."""
    key = re.sub(r"[^a-z0-9]+", "-", text.strip().lower()).strip("-")
    key = re.sub(r"-?scheme$", "", key)
    if key in CATEGORIES:
        return key
    if key in _ALIASES:
        return _ALIASES[key]
    for cat in CATEGORIES:
        if key and (key in cat or cat in key):
            return cat
    return None


def parse_ranked_labels(response: str) -> list:
    """Ranked candidate categories (deduplicated, at most three)."""
    candidates = []
    matches = sorted(
        [(m.start(), int(m.group(1)), m.group(2)) for m in
         _RANKED_LINE_RE.finditer(response or "")],
        key=lambda t: (t[1], t[0]))
    if matches:
        candidates = [text for _, _, text in matches]
    else:
        candidates = [m.group(1) for m in _NUMBERED_RE.finditer(response or "")]

    labels = []
    for text in candidates:
        cat = normalize_category(text)
        if cat is not None and cat not in labels:
            labels.append(cat)
    if not labels:
        raise NoParsableLabels("response names no recognizable category")
    return labels[:3]
