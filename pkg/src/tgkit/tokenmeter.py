"""BPE token counting and per-format token budget reports.

The cl100k_base vocabulary ships with the package as a base64 rank table
(sha256-pinned); nothing is fetched at runtime. Text is split with the
encoding's regex — rewritten against vendored Unicode letter/number/whitespace
tables because the stdlib ``re`` module lacks ``\\p{...}`` classes — and each
piece is merged greedily by rank, exactly like the reference tokenizer.
"""

import base64
import hashlib
import json
import re
from dataclasses import dataclass
from importlib import resources

from .errors import EncodingDataError, UnknownEncoding, UnknownModel

_CL100K_SHA256 = "223921b76ee99bde995b7ff738513eef100fb51d18c93597a113bcffe865b2a7"

DEFAULT_BUDGETS = {
    "gpt-3.5": 16385,
    "deepseek": 64000,
    "gpt-4": 128000,
    "gpt-4o": 128000,
}

GRAPH_FORMATS = ("llm4tg", "graphml", "gexf", "gml")


@dataclass(frozen=True)
class TokenBudget:
    model: str
    limit: int


def budget_for(model: str) -> TokenBudget:
    """Budget for a model name; the gpt-4 family shares one context limit."""
    if model in DEFAULT_BUDGETS:
        return TokenBudget(model, DEFAULT_BUDGETS[model])
    if model.startswith("gpt-4"):
        return TokenBudget(model, DEFAULT_BUDGETS["gpt-4"])
    known = ", ".join(sorted(DEFAULT_BUDGETS))
    raise UnknownModel(f"no token budget for {model!r}; known models: {known}")


def default_budgets() -> list:
    return [TokenBudget(m, lim) for m, lim in DEFAULT_BUDGETS.items()]


# ---------------------------------------------------------------------------
# encoding machinery


def _char_class(ranges) -> str:
    parts = []
    for lo, hi in ranges:
        if lo == hi:
            parts.append(re.escape(chr(lo)))
        else:
            parts.append(f"{re.escape(chr(lo))}-{re.escape(chr(hi))}")
    return "".join(parts)


def _cl100k_pattern() -> "re.Pattern":
    with resources.files("tgkit").joinpath("data/char_classes.json").open("rb") as fh:
        tables = json.load(fh)
    letter = _char_class(tables["L"])
    number = _char_class(tables["N"])
    space = _char_class(tables["WS"])
    # U+017F is the only extra simple case fold ('s) the contraction branch needs
    return re.compile(
        "'(?:[sSſ]|[tT]|[rR][eE]|[vV][eE]|[mM]|[lL][lL]|[dD])"
        f"|[^\r\n{letter}{number}]?[{letter}]+"
        f"|[{number}]{{1,3}}"
        f"| ?[^{space}{letter}{number}]+[\r\n]*"
        f"|[{space}]*[\r\n]+"
        f"|[{space}]+(?![^{space}])"
        f"|[{space}]+"
    )


def _load_ranks(filename: str, expected_sha256: str) -> dict:
    try:
        blob = resources.files("tgkit").joinpath(f"data/{filename}").read_bytes()
    except FileNotFoundError:
        raise EncodingDataError(f"encoding data file {filename} is missing") from None
    digest = hashlib.sha256(blob).hexdigest()
    if digest != expected_sha256:
        raise EncodingDataError(
            f"{filename} checksum mismatch: {digest} != {expected_sha256}")
    ranks = {}
    for line in blob.splitlines():
        if not line:
            continue
        token_b64, _, rank = line.partition(b" ")
        ranks[base64.b64decode(token_b64)] = int(rank)
    return ranks


class BpeEncoding:
    """A loaded byte-pair encoding: regex splitter plus merge rank table."""

    def __init__(self, name: str, pattern: "re.Pattern", ranks: dict):
        self.name = name
        self._pattern = pattern
        self._ranks = ranks
        self._count_cache = {}

    def encode(self, text: str) -> list:
        """Token ids for the text (special markers are treated as plain text)."""
        ids = []
        for m in self._pattern.finditer(text):
            piece = m.group().encode("utf-8")
            rank = self._ranks.get(piece)
            if rank is not None:
                ids.append(rank)
            else:
                ids.extend(self._ranks[p] for p in self._merge(piece))
        return ids

    def count(self, text: str) -> int:
        """Exact token count; caches per-piece counts (graph text repeats a lot)."""
        cache = self._count_cache
        if len(cache) > 1_000_000:
            cache.clear()
        total = 0
        for m in self._pattern.finditer(text):
            piece = m.group()
            n = cache.get(piece)
            if n is None:
                raw = piece.encode("utf-8")
                n = 1 if raw in self._ranks else len(self._merge(raw))
                cache[piece] = n
            total += n
        return total

    def _merge(self, piece: bytes) -> list:
        """Greedy lowest-rank pair merging (leftmost wins on equal ranks)."""
        ranks = self._ranks
        parts = [piece[i:i + 1] for i in range(len(piece))]
        while len(parts) > 1:
            best_rank = None
            best_i = 0
            for i in range(len(parts) - 1):
                r = ranks.get(parts[i] + parts[i + 1])
                if r is not None and (best_rank is None or r < best_rank):
                    best_rank = r
                    best_i = i
            if best_rank is None:
                break
            parts[best_i:best_i + 2] = [parts[best_i] + parts[best_i + 1]]
        return parts


_ENCODINGS = {}


def get_encoding(name: str = "cl100k_base") -> BpeEncoding:
    enc = _ENCODINGS.get(name)
    if enc is None:
        if name != "cl100k_base":
            raise UnknownEncoding(f"unknown encoding {name!r}")
        enc = BpeEncoding(name, _cl100k_pattern(),
                          _load_ranks("cl100k_base.tiktoken", _CL100K_SHA256))
        _ENCODINGS[name] = enc
    return enc


def count_tokens(text: str, encoding: str = "cl100k_base") -> int:
    return get_encoding(encoding).count(text)


# ---------------------------------------------------------------------------
# per-format reports


@dataclass
class FormatReport:
    node_count: int
    counts: dict  # format -> token count
    fits: dict    # (format, model) -> bool

    def fits_all(self) -> bool:
        return all(self.fits.values())


def compare_formats(g, budgets=None, encoding: str = "cl100k_base") -> FormatReport:
    """Token counts of the llm4tg/graphml/gexf/gml renderings of one graph."""
    from .formats import write_standard
    from .llm4tg import serialize_llm4tg

    budgets = default_budgets() if budgets is None else list(budgets)
    counts = {"llm4tg": count_tokens(serialize_llm4tg(g).text, encoding)}
    for fmt in ("graphml", "gexf", "gml"):
        counts[fmt] = count_tokens(write_standard(g, fmt), encoding)
    fits = {(fmt, b.model): counts[fmt] <= b.limit
            for fmt in GRAPH_FORMATS for b in budgets}
    return FormatReport(node_count=len(g), counts=counts, fits=fits)


def _column_name(model: str) -> str:
    return "fits_" + re.sub(r"[^a-z0-9]+", "", model.lower())


def report_csv(reports, budgets=None) -> str:
    """Plot-ready CSV: one row per (graph, format)."""
    budgets = default_budgets() if budgets is None else list(budgets)
    header = ["node_count", "format", "tokens"]
    header += [_column_name(b.model) for b in budgets]
    lines = [",".join(header)]
    for rep in reports:
        for fmt in GRAPH_FORMATS:
            row = [str(rep.node_count), fmt, str(rep.counts[fmt])]
            row += [str(rep.fits[(fmt, b.model)]).lower() for b in budgets]
            lines.append(",".join(row))
    return "\n".join(lines) + "\n"
