"""Exception hierarchy shared by every module."""


class PflabError(Exception):
    exit_code = 1


class DomainError(PflabError, ValueError):
    """An input violates a precondition of the requested operation."""

    exit_code = 1


class ParseError(DomainError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResourceError(PflabError):
    """The input exceeds a configured enumeration limit or budget."""

    exit_code = 2


class VerificationError(PflabError, AssertionError):
    """An internally checked mathematical postcondition failed."""

    exit_code = 3
