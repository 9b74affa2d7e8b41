"""Exception hierarchy shared across the package.

Every domain failure derives from LegalRagError so callers (CLI, service)
can map them to exit codes / HTTP errors in one place.
"""
from __future__ import annotations


class LegalRagError(Exception):
    """Base class for all domain errors."""


# -- corpus loading ----------------------------------------------------------

class MissingFile(LegalRagError):
    pass


class SchemaViolation(LegalRagError):
    pass


class DuplicateId(LegalRagError):
    pass


# -- tokenizing / chunking ---------------------------------------------------

class DegenerateConfig(LegalRagError):
    pass


# -- embedding / gateway providers -------------------------------------------

class EmptyText(LegalRagError):
    pass


class ProviderUnavailable(LegalRagError):
    """Remote provider kept failing after the retry schedule ran out."""


class MalformedProviderReply(LegalRagError):
    pass


class DimensionMismatch(LegalRagError):
    pass


# -- vector index -------------------------------------------------------------

class DuplicateChunkId(LegalRagError):
    pass


class CorruptIndexFile(LegalRagError):
    pass


class VersionMismatch(LegalRagError):
    pass


# -- llm gateway --------------------------------------------------------------

class BudgetExceeded(LegalRagError):
    """Request would bust the model token limit; caller bug, not retryable."""


# -- qa synthesis -------------------------------------------------------------

class ParseFailure(LegalRagError):
    pass


class CountMismatch(LegalRagError):
    pass


class EmptyField(LegalRagError):
    pass


class NoLawArticles(LegalRagError):
    pass


# -- query engine -------------------------------------------------------------

class EmptyQuestion(LegalRagError):
    pass


# -- evaluation ---------------------------------------------------------------

class EmptyJudgments(LegalRagError):
    pass


class SatisfactionOutOfBand(LegalRagError):
    pass


# -- service ------------------------------------------------------------------

class BindFailure(LegalRagError):
    pass


class IndexLoadFailure(LegalRagError):
    pass
