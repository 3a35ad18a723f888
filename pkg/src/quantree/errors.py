"""Exception hierarchy; the CLI maps each class to an exit code."""


class QuantreeError(ValueError):
    exit_code = 1


class ParseError(QuantreeError):
    """Malformed input file or polynomial string."""

    exit_code = 2


class InconsistentInputError(QuantreeError):
    """Well-formed input that no equilateral tree can produce."""

    exit_code = 3


class BoundExceededError(QuantreeError):
    """Request beyond the desk-scale bounds (enumeration, census)."""

    exit_code = 4
