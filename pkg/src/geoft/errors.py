"""Exception and warning types raised across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DomainError(GeometryError):
    """An argument lies outside the domain of a trigonometric relation."""


class UndefinedDirectionError(GeometryError):
    """The direction between two coincident points was requested."""


class NonUniqueGeodesicError(GeometryError):
    """More than one minimizing geodesic joins the two points."""


class NonUniqueGeodesicWarning(UserWarning):
    pass


class DegenerateError(GeometryError):
    """A triangle, weight triple or angle set sits on a degenerate boundary."""


class InconsistentAnglesError(GeometryError):
    pass


class PoleSingularityError(GeometryError):
    """The profile radius vanishes, so the revolution chart is singular."""


class NoGeodesicFoundError(RuntimeError):
    """The shooting scan bracketed no connecting geodesic."""

    def __init__(self, message, n_scan=None):
        super().__init__(message)
        self.n_scan = n_scan


class BalanceViolationError(GeometryError):
    """A mass-flow record violates one of its balance equations."""

    def __init__(self, message, equation):
        super().__init__(message)
        self.equation = equation


class ConvergenceError(RuntimeError):
    """Descent stopped before the gradient norm reached tolerance.

    Carries the best iterate seen so the caller can still inspect it.
    """

    def __init__(self, message, best_point=None, residual=None, iterations=None):
        super().__init__(message)
        self.best_point = best_point
        self.residual = residual
        self.iterations = iterations
