"""Exception types shared across the package."""


class PolyassignError(Exception):
    """Base class for all package-specific errors."""


class BoundaryRangeError(PolyassignError, ValueError):
    """A boundary coordinate lies outside [0, cycle length) or is not finite."""


class UnsupportedMetricError(PolyassignError, ValueError):
    """The requested metric is not defined for the given shape."""


class UnsupportedEmbeddingError(PolyassignError, ValueError):
    """The shape has no canonical planar embedding."""


class CapacityExhaustedError(PolyassignError, RuntimeError):
    """No facility has residual capacity for the arriving customer."""


class TooManyCustomersError(PolyassignError, ValueError):
    """Customer count exceeds a solver's enumeration bound."""


class ScenarioError(PolyassignError, ValueError):
    """A scenario violates a structural precondition."""


class NudgeError(PolyassignError, ValueError):
    """A nudge epsilon is negative or too large for the facility spacing."""


class ScenarioFormatError(PolyassignError, ValueError):
    """A scenario file or case spec string cannot be parsed."""


class OracleDisagreementError(PolyassignError, RuntimeError):
    """The two independent optimum solvers returned different totals."""
