"""Exception types shared across the package."""

from __future__ import annotations


class PatsimError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PatsimError):
    """An input violates an operation's precondition."""


class UnknownPatentError(DomainError):
    """A patent id does not resolve in the corpus."""

    def __init__(self, patent_id: str):
        super().__init__(f"unknown patent id: {patent_id!r}")
        self.patent_id = patent_id


class IpcParseError(PatsimError):
    """A raw IPC string does not parse.

    ``position`` is the character offset of the first offending character
    in the (whitespace-stripped) input, when known.
    """

    def __init__(self, message: str, raw: str | None = None, position: int | None = None):
        detail = message
        if raw is not None:
            detail = f"{message} in {raw!r}"
            if position is not None:
                detail += f" at position {position}"
        super().__init__(detail)
        self.raw = raw
        self.position = position


class IngestError(PatsimError):
    """Raised in strict mode when any document or pair fails ingest.

    ``issues`` holds the per-line problems that would otherwise have been
    collected fail-soft.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(str(i) for i in self.issues[:5])
        more = f" (+{len(self.issues) - 5} more)" if len(self.issues) > 5 else ""
        super().__init__(f"{len(self.issues)} ingest error(s): {lines}{more}")


class DegenerateVectorError(DomainError):
    """Cosine similarity is undefined for a zero vector."""


class ConstantInputError(DomainError):
    """Correlation is undefined when either sequence is constant."""


class PendingExpertError(PatsimError):
    """Panel ratings disagree past the threshold but no expert rating exists."""

    def __init__(self, message: str = "law-expert rating required but missing", pair: str | None = None):
        if pair is not None:
            message = f"{message} for pair {pair}"
        super().__init__(message)
        self.pair = pair


class ProviderError(PatsimError):
    """Base class for embedding-provider failures."""

    def __init__(self, message: str, model_id: str | None = None):
        if model_id is not None:
            message = f"{message} (model_id={model_id})"
        super().__init__(message)
        self.model_id = model_id


class TransportError(ProviderError):
    """The remote embedding service is unreachable or timed out."""


class ContractViolationError(ProviderError):
    """A provider returned data that breaks its declared contract."""


class VectorCacheError(PatsimError):
    """The vector cache file is malformed or missing a requested record."""
