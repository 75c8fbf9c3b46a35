"""Exception types shared across the package."""


class EnvelopeError(Exception):
    """Base class for every error raised by this package."""


class TooFewSamples(EnvelopeError, ValueError):
    """A periodic signal needs at least four samples."""


class NonFiniteSample(EnvelopeError, ValueError):
    """Signal samples must all be finite."""


class LipschitzTooSmall(EnvelopeError, ValueError):
    """A user-supplied slope bound is below the slope observed in the samples."""


class BudgetTooLarge(EnvelopeError, ValueError):
    """Harmonic budget above the supported maximum (64)."""


class TooFewConstraints(EnvelopeError, ValueError):
    """Constraint count must be at least the number of free parameters (2L+1)."""


class DimensionMismatch(EnvelopeError, ValueError):
    """Array shapes passed to the QP layer are inconsistent."""


class NotConverged(EnvelopeError, RuntimeError):
    """Solver hit its iteration cap with residuals still above tolerance.

    The best iterate and its diagnostics are attached as ``solution``.
    """

    def __init__(self, message: str, solution=None):
        super().__init__(message)
        self.solution = solution


class DegeneratePolygon(EnvelopeError, ValueError):
    """Polygon has (numerically) zero area, too few vertices, or crosses itself."""


class NoIntersection(EnvelopeError, RuntimeError):
    """A ray cast from the centroid failed to hit the polygon boundary."""


class NonpositiveRadius(EnvelopeError, ValueError):
    """Envelope dips to zero or below; a radial region cannot be rebuilt from it."""
