class UisError(Exception):
    pass


class UsageError(UisError, ValueError):
    """Bad input: mismatched backends or flavors, malformed text, unknown generator."""


class ResourceError(UisError):
    """A size cap was hit. Raised instead of silently truncating."""


class EmptyIntervalError(UisError, ValueError):
    pass


class DomainError(UisError, ValueError):
    """A partial map was applied outside its domain."""
