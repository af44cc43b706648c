class InvalidInput(ValueError):
    """Input violates a documented precondition (bad class, bad roots, ...)."""


class ResourceExceeded(RuntimeError):
    """An exhaustive search ran over its configured node budget."""


class InternalInconsistency(AssertionError):
    """A construction that the characterization guarantees has failed.

    Raised instead of returning a silent NO so that bugs and proof gaps
    surface as loud test failures.
    """
