"""Exception hierarchy shared by every module."""


class CollapsimError(Exception):
    """Base class for all package errors."""


class RejectedInputError(CollapsimError, ValueError):
    """An argument violates an operation's precondition."""


class CapacityError(CollapsimError):
    """A requested Hilbert dimension or enumeration exceeds the configured maximum."""


class ParseError(CollapsimError, ValueError):
    """A text document could not be parsed.

    ``line`` is the 1-based line number when known; ``field`` names the
    offending schema field for structured documents.
    """

    def __init__(self, message, *, line=None, field=None):
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix = f"line {line}: "
        elif field is not None:
            prefix = f"field '{field}': "
        super().__init__(prefix + message)
