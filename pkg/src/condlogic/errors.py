"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all condlogic errors."""


class InvariantError(ToolkitError):
    """A domain invariant or operation precondition was violated."""


class ParseError(ToolkitError):
    """Template text could not be parsed; carries the source location."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class BankError(ToolkitError):
    """The NLI bank cannot satisfy a sampling request."""


class GenerationError(ToolkitError):
    """Template generation could not make progress."""
