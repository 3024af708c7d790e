"""tgkit: Bitcoin transaction-graph analysis with LLMs.

Converts rooted transaction subgraphs to the token-efficient LLM4TG text
format (with GraphML/GEXF/GML interop), condenses them with the CETraS
importance sampler, counts BPE tokens against model budgets, and runs the
three-level evaluation pipeline with automatic grading.
"""

from . import harness
from .amounts import format_amount, parse_amount
from .cetras import ImportanceTable, SampleConfig, importance_table, node_importance, sample
from .features import FeatureVector, compute_features, feature_prompt_block, features_csv
from .formats import parse_standard, read_standard, write_standard
from .graph import (
    CATEGORIES,
    AddressNode,
    Edge,
    TransactionGraph,
    TransactionNode,
    build_graph,
    graphs_equal,
    layer_of,
    shortest_path,
)
from .ingest import RawTxRecord, ingest_raw, read_raw_csv
from .llm4tg import Llm4tgDocument, parse_llm4tg, serialize_llm4tg
from .oracle import (
    AnswerKey,
    answer_key,
    global_argmax,
    node_metric,
    special_info_address,
    special_info_transaction,
)
from .synthetic import random_graph
from .tokenmeter import (
    FormatReport,
    TokenBudget,
    budget_for,
    compare_formats,
    count_tokens,
)

__version__ = "0.1.0"

__all__ = [
    "AddressNode",
    "AnswerKey",
    "CATEGORIES",
    "Edge",
    "FeatureVector",
    "FormatReport",
    "ImportanceTable",
    "Llm4tgDocument",
    "RawTxRecord",
    "SampleConfig",
    "TokenBudget",
    "TransactionGraph",
    "TransactionNode",
    "answer_key",
    "budget_for",
    "build_graph",
    "compare_formats",
    "compute_features",
    "count_tokens",
    "feature_prompt_block",
    "features_csv",
    "format_amount",
    "global_argmax",
    "graphs_equal",
    "harness",
    "importance_table",
    "ingest_raw",
    "layer_of",
    "node_importance",
    "node_metric",
    "parse_amount",
    "parse_llm4tg",
    "parse_standard",
    "random_graph",
    "read_raw_csv",
    "read_standard",
    "sample",
    "serialize_llm4tg",
    "shortest_path",
    "special_info_address",
    "special_info_transaction",
    "write_standard",
]
