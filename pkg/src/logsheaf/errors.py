"""Exception hierarchy.

``PreconditionError`` covers violated mathematical preconditions (the CLI maps
these to exit code 2); ``ParseError`` and ``ConfigurationError`` cover malformed
input (exit code 1).
"""


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class ContainmentError(PreconditionError):
    """A vector or subgroup is not contained in the expected lattice."""


class NotSharpError(PreconditionError):
    pass


class NotAFaceError(PreconditionError):
    pass


class FacetPairingError(PreconditionError):
    """An element pairs to zero with a facet normal."""


class StarCenterError(PreconditionError):
    pass


class ConfigurationError(ValueError):
    """Inconsistent or incomplete input configuration."""


class ParseError(ValueError):
    """Malformed text input; ``offset`` is a 0-based character offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
