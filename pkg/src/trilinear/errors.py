"""Exception hierarchy.  Lattice-aware errors carry the offending location."""


class TrilinearError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TrilinearError, ValueError):
    """Argument outside the domain of a function (e.g. ``|q| >= 1`` for q-Gamma)."""


class ClassicalModeError(DomainError):
    """A q-number was requested at ``q = 1``; use the classical coefficient path."""


class PoleError(DomainError):
    """Argument on (or within tolerance of) a pole of a q-product."""

    def __init__(self, message, index=None):
        super().__init__(message if index is None else f"{message} (index {index})")
        self.index = index


class InvalidWeightError(TrilinearError, ValueError):
    """Weight index with the wrong parity for its module."""


class DegenerateParameterError(TrilinearError):
    """Parameters in (or numerically near) an excluded set."""

    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{message} at {location}")
        self.location = location


class DegenerateSeedError(DegenerateParameterError):
    """The seeding rule divides by a vanishing coefficient."""


class BreakdownError(TrilinearError):
    """A recurrence divisor vanished during construction."""

    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{message} at {location}")
        self.location = location
