"""Exception hierarchy."""


class WeakBornError(ValueError):
    """Base class for all errors raised by this package."""


class ZeroVector(WeakBornError):
    pass


class DimensionMismatch(WeakBornError):
    pass


class NotHermitian(WeakBornError):
    pass


class NotOrthonormal(WeakBornError):
    pass


class DegenerateDenominator(WeakBornError):
    """A contextual value was requested where its denominator vanishes.

    For the weak value this means the post-selected state is orthogonal to the
    pre-selected one, i.e. it lies outside the sample space.
    """


class NotInSubalgebra(WeakBornError):
    """Operator is not diagonal in the given context."""


class InvalidMeasureSpec(WeakBornError):
    pass


class NotConverged(WeakBornError):
    pass
