class IndependenceBoundsException(Exception):
    pass


class MarginalValidationError(IndependenceBoundsException):
    def __init__(
        self,
        message="Marginal probabilities are invalid.",
        index: int | None = None,
    ):
        self.index = index
        super().__init__(message)


class ProfileFileNotFound(IndependenceBoundsException):
    def __init__(self, message="Profile file not found."):
        super().__init__(message)


class ProfileParseError(IndependenceBoundsException):
    def __init__(self, message="Profile file could not be parsed."):
        super().__init__(message)


class RationalModeError(IndependenceBoundsException):
    def __init__(
        self,
        message="Value is not expressible as a bounded-denominator fraction.",
    ):
        super().__init__(message)


class SOutsideInterval(IndependenceBoundsException):
    def __init__(self, message="s outside feasible interval."):
        super().__init__(message)


class EnumerationCapExceeded(IndependenceBoundsException):
    def __init__(self, message="Too many events for atom enumeration."):
        super().__init__(message)


class ThresholdOutOfRange(IndependenceBoundsException):
    def __init__(self, message="Threshold k is out of range."):
        super().__init__(message)


class BoundsInvariantViolation(IndependenceBoundsException):
    def __init__(self, message="Computed bound violates [0, 1] ordering."):
        super().__init__(message)


class UnknownTablePreset(IndependenceBoundsException):
    def __init__(self, message="Unknown table preset."):
        super().__init__(message)


class InvalidGrid(IndependenceBoundsException):
    def __init__(self, message="Scan grid needs at least two points."):
        super().__init__(message)
