class SboxIneqError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(SboxIneqError, ValueError):
    """Malformed input or a model that fails a soundness check."""

    exit_code = 2


class SboxInputError(ValidationError):
    pass


class DimensionError(ValidationError):
    pass


class CompletenessError(ValidationError):
    """Some impossible point survives every inequality of a model."""

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class InfeasibleCoverError(ValidationError):
    """A candidate pool leaves an impossible point uncovered."""

    def __init__(self, point):
        super().__init__(f"no candidate removes impossible point {point}")
        self.point = point


class CertificationError(ValidationError):
    pass


class ResourceLimitError(SboxIneqError):
    """A configurable budget (facets, sums, nodes, time) was exceeded."""

    exit_code = 3
