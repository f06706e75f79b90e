"""Exception hierarchy shared by the engine and the command line.

Domain errors map to exit code 3 and resource caps to exit code 4.
"""


class DomainError(ValueError):
    """Invalid mathematical input (bad field, singular curve, ...)."""


class ResourceCap(RuntimeError):
    """A configured size limit would be exceeded."""


class CompositeP(DomainError):
    pass


class UnsupportedCharacteristic(DomainError):
    pass


class UnsupportedDegree(DomainError):
    pass


class FieldTooLarge(ResourceCap):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class NotASquare(DomainError):
    pass


class ZeroVector(DomainError):
    pass


class SingularCurve(DomainError):
    pass


class IdenticalCurves(DomainError):
    pass


class NoTriangleFound(DomainError):
    pass


class TooFewPoints(DomainError):
    pass


class SigmaHyperplane(DomainError):
    pass


class NotNormalized(DomainError):
    pass


class HypothesisViolated(DomainError):
    pass


class EmptyGoodSet(DomainError):
    pass


class TooLarge(ResourceCap):
    pass


class ScanTooLarge(ResourceCap):
    pass
