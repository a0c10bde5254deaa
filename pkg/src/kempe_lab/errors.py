"""Exception types shared across the package."""


class KempeLabError(Exception):
    """Base class for every error raised by kempe_lab."""


class Graph6Error(KempeLabError, ValueError):
    """Malformed or unsupported graph6 record.

    ``offset`` is the byte offset (within the record) where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class MoveUndefinedError(KempeLabError, ValueError):
    """The anchor vertex is not colored with either color of the pair."""


class InvalidSwapError(KempeLabError, ValueError):
    """A Kempe swap would leave the list assignment."""


class CapacityError(KempeLabError):
    """An enumeration exceeded its configured cap."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeds the cap of {cap}")
        self.cap = cap


class WitnessInvalidError(KempeLabError, ValueError):
    """A supplied swap sequence does not replay."""


class InvariantViolation(KempeLabError, AssertionError):
    """A construction that must succeed under its preconditions failed."""


class NotSwappableError(KempeLabError):
    """An inner equalization step found two colorings in different components."""

    def __init__(self, message: str, lists=None):
        super().__init__(message)
        self.lists = lists
