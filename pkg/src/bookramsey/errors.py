"""Exception types shared across the toolkit."""


class ParseError(ValueError):
    """Malformed input file (graph6, BRC1, or JSON descriptor).

    Carries enough position information for the CLI to print a usable
    diagnostic.
    """

    def __init__(self, message: str, *, line: int | None = None, offset: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", offset {offset}" if offset is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.offset = offset


class CapacityError(ValueError):
    """Requested an exact computation beyond the supported exhaustive range."""
