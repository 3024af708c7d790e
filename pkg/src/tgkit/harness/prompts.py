"""Prompt construction for the three evaluation levels.

Templates are static text assets (checked in under ``templates/``; regenerate
them by hand if the instruction style needs to change). Builders only fill in
graph blocks, question batteries, and category lists, and can enforce a token
budget before anything reaches a model.
"""

import random
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .. import tokenmeter
from ..errors import BudgetExceeded, MixedMode, UnknownNodeInQuestion
from ..features import FeatureVector, feature_prompt_block
from ..graph import CATEGORIES, TransactionGraph, TransactionNode, node_index
from ..llm4tg import Llm4tgDocument
from ..oracle import GLOBAL_METRICS, NODE_METRICS


def _template(name: str) -> str:
    path = resources.files("tgkit.harness").joinpath(f"templates/{name}.txt")
    return path.read_text(encoding="utf-8")


@dataclass(frozen=True)
class Question:
    """One graded question; ``qid`` is the required answer-line key."""

    qid: str
    kind: str                      # global | node_value | special_a | special_t
    metric: str
    node: Optional[str] = None
    query: Optional[str] = None
    direction: Optional[str] = None

    @property
    def family(self) -> str:
        """Metric family name used in summaries (qid minus its arguments)."""
        return self.qid.split("[", 1)[0]


def global_questions() -> list:
    return [Question(qid=f"global_{m}", kind="global", metric=m)
            for m in GLOBAL_METRICS]


def select_questions(g: TransactionGraph, seed: int) -> list:
    """The default battery: 6 global queries plus 6 node lookups.

    One node is selected per layer (seeded); the four attribute lookups rotate
    over the selected nodes, the time-range question targets an address, and
    the membership question targets a transaction with a seeded query node
    that is present or absent with equal probability.
    """
    rng = random.Random(seed)
    by_layer = {}
    for vid in g.ordered_ids():
        by_layer.setdefault(g.layers[vid], []).append(vid)
    selected = [rng.choice(by_layer[layer]) for layer in sorted(by_layer)]

    questions = global_questions()
    for i, metric in enumerate(NODE_METRICS):
        node = selected[i % len(selected)]
        questions.append(Question(qid=f"node_{metric}[{node}]",
                                  kind="node_value", metric=metric, node=node))

    addresses = [v for v in selected if g.is_address(v)]
    target = addresses[0] if addresses else g.root
    questions.append(Question(qid=f"node_special_info_a[{target}]",
                              kind="special_a", metric="special_info_a",
                              node=target))

    txs = [v for v in selected if not g.is_address(v)]
    if not txs:
        txs = [v for v in g.ordered_ids() if not g.is_address(v)]
    if txs:
        tx = txs[0]
        direction = rng.choice(("in", "out"))
        members = getattr(g.node(tx), f"{direction}_nodes")
        others = [v for v in g.ordered_ids()
                  if g.is_address(v) and v not in members]
        pool = members if (members and (not others or rng.random() < 0.5)) else others
        if pool:
            query = rng.choice(sorted(pool, key=node_index))
            questions.append(Question(
                qid=f"node_special_info_t[{tx},{query},{direction}]",
                kind="special_t", metric="special_info_t",
                node=tx, query=query, direction=direction))
    return questions


_QUESTION_TEXT = {
    "global_in_degree": "Which node has the largest in_degree?",
    "global_out_degree": "Which node has the largest out_degree?",
    "global_in_value": "Which node has the largest in_value?",
    "global_out_value": "Which node has the largest out_value?",
    "global_diff_degree": ("Which node has the largest absolute difference "
                           "between its in_degree and out_degree?"),
    "global_diff_value": ("Which node has the largest absolute difference "
                          "between its in_value and out_value?"),
}

_SCHEMA_HINT = {
    "global": "<node id>",
    "node_value": "<number>",
    "special_a": "<seconds>",
    "special_t": "<true|false>",
}


def _question_line(q: Question) -> str:
    if q.kind == "global":
        return f"{q.qid}: {_QUESTION_TEXT[q.qid]}"
    if q.kind == "node_value":
        return f"{q.qid}: What is the {q.metric} of node {q.node}?"
    if q.kind == "special_a":
        return f"{q.qid}: What is the time_range of address node {q.node}?"
    return (f"{q.qid}: Does node {q.query} appear in the {q.direction}_nodes "
            f"of transaction {q.node}?")


def build_prompt_level1(doc: Llm4tgDocument, questions,
                        budget: Optional[tokenmeter.TokenBudget] = None,
                        encoding: str = "cl100k_base") -> str:
    """Embed the graph and the question battery with a parseable answer schema."""
    known = doc.node_ids()
    for q in questions:
        for ref in (q.node, q.query):
            if ref is not None and ref not in known:
                raise UnknownNodeInQuestion(f"{q.qid} references {ref}, "
                                            f"which the document does not define")
    prompt = _template("level1").format(
        graph_block=doc.text.rstrip("\n"),
        questions_block="\n".join(_question_line(q) for q in questions),
        schema_block="\n".join(f"{q.qid}: {_SCHEMA_HINT[q.kind]}"
                               for q in questions),
    )
    _check_budget(prompt, budget, encoding)
    return prompt


def build_prompt_level2(references, target: Llm4tgDocument,
                        budget: Optional[tokenmeter.TokenBudget] = None,
                        encoding: str = "cl100k_base") -> str:
    """Unlabelled reference blocks plus the target graph."""
    if not references:
        raise ValueError("need at least one reference document")
    blocks = [f"Reference subgraph {i}:\n{doc.text.rstrip()}"
              for i, doc in enumerate(references, start=1)]
    prompt = _template("level2").format(
        reference_blocks="\n\n".join(blocks),
        target_block=target.text.rstrip("\n"),
    )
    _check_budget(prompt, budget, encoding)
    return prompt


def build_prompt_level3(references, target, mode: str,
                        budget: Optional[tokenmeter.TokenBudget] = None,
                        encoding: str = "cl100k_base") -> str:
    """Labelled references plus an unlabelled target, raw or feature mode."""
    if mode not in ("raw", "features"):
        raise ValueError(f"mode must be 'raw' or 'features', got {mode!r}")
    if not references:
        raise ValueError("need at least one labelled reference")
    ref_blocks = []
    for i, (payload, category) in enumerate(references, start=1):
        block = _level3_block(payload, mode)
        ref_blocks.append(f"Reference sample {i} (category: {category}):\n{block}")
    target_block = _level3_block(target, mode)
    prompt = _template("level3").format(
        category_list="\n".join(f"- {c}" for c in CATEGORIES),
        reference_blocks="\n\n".join(ref_blocks),
        target_block=target_block,
    )
    _check_budget(prompt, budget, encoding)
    return prompt


def _level3_block(payload, mode: str) -> str:
    if mode == "raw":
        if not isinstance(payload, Llm4tgDocument):
            raise MixedMode("raw mode needs LLM4TG documents")
        return payload.text.rstrip("\n")
    if not isinstance(payload, FeatureVector):
        raise MixedMode("features mode needs feature vectors")
    return feature_prompt_block(payload)


def _check_budget(prompt, budget, encoding) -> None:
    if budget is None:
        return
    n = tokenmeter.count_tokens(prompt, encoding)
    if n > budget.limit:
        raise BudgetExceeded(
            f"prompt needs {n} tokens but {budget.model} allows {budget.limit}")
