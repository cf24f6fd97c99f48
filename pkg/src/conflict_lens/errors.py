"""Exception types raised by conflict_lens."""


class ConflictLensError(Exception):
    """Base class for all package errors."""


class InfeasibleBinCount(ConflictLensError, ValueError):
    pass


class UnsortedEventsError(ConflictLensError, ValueError):
    pass


class InvalidDistribution(ConflictLensError, ValueError):
    pass


class SchemaVersionError(ConflictLensError, ValueError):
    def __init__(self, expected, found):
        self.expected = expected
        self.found = found
        super().__init__(
            "schema_version mismatch: expected %r, found %r" % (expected, found))


class DocumentError(ConflictLensError, ValueError):
    """A persisted document is well-formed JSON but violates a model invariant."""


class EvaluationError(ConflictLensError, ValueError):
    pass
