"""Exception types raised across the package."""


class TiltcaraError(Exception):
    """Base class for every error raised by this package."""


class InvalidTilt(TiltcaraError, ValueError):
    pass


class DivisionByNearZeroConstantTerm(TiltcaraError, ZeroDivisionError):
    pass


class NonzeroInnerConstant(TiltcaraError, ValueError):
    pass


class BadBranchAnchor(TiltcaraError, ValueError):
    pass


class OutsideEvaluationRadius(TiltcaraError, ValueError):
    pass


class InvalidMeasure(TiltcaraError, ValueError):
    pass


class TiltMismatch(TiltcaraError, ValueError):
    pass


class TiltSumOutOfRange(TiltcaraError, ValueError):
    pass


class RadiusOutOfRange(TiltcaraError, ValueError):
    pass


class NoAttainment(TiltcaraError, ValueError):
    pass


class UnknownBound(TiltcaraError, KeyError):
    pass


class NotSpirallike(TiltcaraError, ValueError):
    pass


class VanishingDerivative(TiltcaraError, ValueError):
    pass


class NonConvergence(TiltcaraError, RuntimeError):
    pass
