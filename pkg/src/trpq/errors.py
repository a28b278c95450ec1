"""Shared exception types."""


class TrpqError(Exception):
    """Base class for all library errors."""


class QuerySyntaxError(TrpqError):
    """Raised on malformed query text.

    Carries the character offset of the failure and, when known, the set of
    token kinds that would have been accepted there.
    """

    def __init__(self, message, position, expected=()):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.expected = frozenset(expected)


class UnsupportedFeature(TrpqError):
    """Surface query uses a construct outside the supported subset."""


class FragmentError(TrpqError):
    """Expression does not belong to the fragment an operation requires."""


class ValidationError(TrpqError):
    """Graph violates a structural invariant."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations) or "invalid graph")


class FormatError(TrpqError):
    """Serialized graph bundle is malformed."""


class ConflictingValue(TrpqError):
    """Two overlapping valued intervals disagree on their value."""


class DomainTooLarge(TrpqError):
    """Point expansion would exceed the configured size cap."""


class ResourceLimit(TrpqError):
    """Evaluation exceeded its work budget."""


class InvalidInstance(TrpqError):
    """Degenerate problem instance for a reduction generator."""


class SizeLimit(TrpqError):
    """Problem instance too large for the brute-force decider."""
