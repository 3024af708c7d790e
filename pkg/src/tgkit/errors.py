"""Exception hierarchy shared across the toolkit.

Graph construction and queries raise ``GraphError`` subclasses; parsers raise
``FormatError`` subclasses (LLM4TG syntax errors carry line/column); the LLM
harness raises ``HarnessError`` subclasses.
"""


class TgkitError(Exception):
    """Base class for all toolkit errors."""


# ---------------------------------------------------------------------------
# graph construction / queries


class GraphError(TgkitError):
    pass


class RootNotAddress(GraphError):
    pass


class BipartiteViolation(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class DisconnectedNode(GraphError):
    pass


class HopBoundExceeded(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class WrongNodeType(GraphError):
    pass


class InvalidNodeId(GraphError):
    pass


class InvalidAttribute(GraphError):
    pass


class SingleNodeGraph(GraphError):
    """Sampling/importance weighting needs at least one non-root node."""


# ---------------------------------------------------------------------------
# parsing / serialization


class FormatError(TgkitError):
    pass


class Llm4tgSyntaxError(FormatError):
    """Grammar violation in an LLM4TG document; carries 1-based position."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class LayerCountMismatch(FormatError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateNode(FormatError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DanglingNodeReference(FormatError):
    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MissingAttribute(FormatError):
    """A standard-format node lacks a required attribute; names both."""


class RootAbsent(FormatError):
    pass


class EmptyInput(FormatError):
    pass


# ---------------------------------------------------------------------------
# features


class MissingTimestamps(TgkitError):
    """Temporal features were demanded but the graph has no timestamps."""


# ---------------------------------------------------------------------------
# token counting


class UnknownEncoding(TgkitError):
    pass


class EncodingDataError(TgkitError):
    """Vendored encoding data file is missing or fails its checksum."""


class UnknownModel(TgkitError):
    pass


# ---------------------------------------------------------------------------
# LLM harness


class HarnessError(TgkitError):
    pass


class UnknownNodeInQuestion(HarnessError):
    pass


class BudgetExceeded(HarnessError):
    pass


class MixedMode(HarnessError):
    pass


class AuthError(HarnessError):
    pass


class RequestTimeout(HarnessError):
    pass


class RateLimited(HarnessError):
    pass


class TransportError(HarnessError):
    pass


class NoParsableLabels(HarnessError):
    pass


class LengthMismatch(HarnessError):
    pass


class ManifestError(TgkitError):
    pass
