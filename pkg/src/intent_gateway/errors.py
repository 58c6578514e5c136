"""Exception hierarchy shared across the package.

Every error raised by this package derives from :class:`IntentGatewayError`.
Pipeline stages may attach the artifacts produced before the failure
(``contexts``, ``raw_output``) to the exception instance so that callers such
as the evaluation harness can still score the retrieval part of a failed
translation.
"""


class IntentGatewayError(Exception):
    """Base class for all package errors."""

    # Partial pipeline artifacts, attached by translate() before re-raising.
    contexts = None
    raw_output = None


class EmptyDocument(IntentGatewayError):
    """Document text is empty or whitespace-only."""


class BadParams(IntentGatewayError):
    """Invalid parameter combination (e.g. overlap >= max_tokens)."""


class UnsupportedModality(IntentGatewayError):
    """Operation does not support the chunk's modality."""


class ModelError(IntentGatewayError):
    """Remote model call failed or timed out."""


class DimensionMismatch(IntentGatewayError):
    """Vector dimension differs from the index dimension."""


class EmptyIndex(IntentGatewayError):
    """Query issued against an index with no entries."""


class IoError(IntentGatewayError):
    """Index file could not be read or written."""


class CorruptIndex(IntentGatewayError):
    """Index file failed checksum or structural validation."""


class EmptyCatalog(IntentGatewayError):
    """No scenario names could be parsed from the catalog reply."""


class EmptyIntent(IntentGatewayError):
    """Intent text is empty after trimming."""


class UnresolvableIntent(IntentGatewayError):
    """Model reply matched no catalog entry."""


class SchemaViolation(IntentGatewayError):
    """Model output does not parse into a structured network intent."""


class MissingContexts(IntentGatewayError):
    """Metric requires retrieved contexts but the sample has none."""


class NoClaims(IntentGatewayError):
    """Faithfulness is undefined for an answer with zero claims."""


class EmptyDataset(IntentGatewayError):
    """Evaluation requires at least one sample."""
