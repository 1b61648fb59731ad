"""Exception types shared across the package."""


class LforgeError(Exception):
    """Base class for all library errors."""


class DimensionError(LforgeError, ValueError):
    """Ambient dimensions disagree, or a variable index is out of range."""


class PolySyntaxError(LforgeError, ValueError):
    """Polynomial text does not match the grammar.

    ``position`` is the 0-based character offset, ``expected`` a short
    description of the token that was expected there.
    """

    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = expected
        super().__init__(f"at position {position}: expected {expected} in {text!r}")


class GradingError(LforgeError, ValueError):
    """Input is inhomogeneous or has the wrong degree for the operation."""


class DegreeCapError(LforgeError):
    """A computation needs a degree above the caller-supplied cap."""

    def __init__(self, needed, cap):
        self.needed = needed
        self.cap = cap
        super().__init__(f"degree {needed} needed but cap is {cap}")


class CapExceeded(LforgeError):
    """Saturation stopped at a cap; ``partial`` holds the algebra reached."""

    def __init__(self, message, partial):
        self.partial = partial
        super().__init__(message)


class FloatModeError(LforgeError):
    """An exact operation was requested on a float-mode group."""


class GroupError(LforgeError, ValueError):
    """Matrices do not form a finite orthogonal group."""


class EmptyFiber(LforgeError):
    """No sample landed on the requested level set."""
