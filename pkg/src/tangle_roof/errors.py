"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class TangleError(Exception):
    """Base class for all library errors."""


class DegenerateStateError(TangleError, ValueError):
    """Zero-norm vector, or a matrix that is not a valid density matrix."""


class QubitCountError(TangleError, ValueError):
    """A measure or operation was applied to the wrong number of qubits."""


class RegionError(TangleError, ValueError):
    """Parameter outside [0, 1], or outside the region where a construction applies."""


class UnknownCaseError(TangleError, KeyError):
    """Unknown catalog key or roof case identifier."""

    def __str__(self):
        # KeyError quotes its argument; we want the plain message
        return str(self.args[0]) if self.args else ""


class StateFileError(TangleError, ValueError):
    """Malformed state file."""
