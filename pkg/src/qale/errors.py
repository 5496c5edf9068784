"""Exception types shared across the package."""


class QaleError(Exception):
    """Base class for package errors."""


class DimensionMismatch(QaleError):
    pass


class NonUnitaryGenerator(QaleError):
    pass


class OrderCapExceeded(QaleError):
    pass


class NotNormal(QaleError):
    pass


class NonUniqueOrInconsistent(QaleError):
    pass


class OrbitResolutionFailure(QaleError):
    pass


class DomainError(QaleError):
    pass


class DegenerateMetric(QaleError):
    pass


class PointTooSingular(QaleError):
    pass


class FieldVanishes(QaleError):
    pass


class InsufficientSamples(QaleError):
    pass


class IntegrationFailure(QaleError):
    pass


class PreconditionFailed(QaleError):
    pass


class ZeroVector(QaleError):
    pass


class ParseError(QaleError):
    pass


class BadRange(QaleError):
    pass


class UnknownSuite(QaleError):
    pass
