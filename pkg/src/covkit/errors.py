"""Exception hierarchy shared by every covkit module."""


class CovkitError(Exception):
    """Base class for all covkit errors."""


class DegenerateInput(CovkitError):
    pass


class InvalidPolygon(CovkitError):
    pass


class OriginOutside(CovkitError):
    pass


class OutsideSupport(CovkitError):
    pass


class AtOrigin(CovkitError):
    pass


class StepTooSmall(CovkitError):
    pass


class NonPositiveCurvature(CovkitError):
    pass


class SampleMismatch(CovkitError):
    pass


class EpsTooLarge(CovkitError):
    pass


class OverlappingArcs(CovkitError):
    pass


class DKMismatch(CovkitError):
    pass


class ZeroVector(CovkitError):
    pass


class OutsideG(CovkitError):
    pass


class ConeViolation(CovkitError):
    pass


class NonConvexResult(CovkitError):
    pass


class PreconditionUnmet(CovkitError):
    pass


class UnknownSuite(CovkitError):
    pass


class ConfigError(CovkitError):
    pass


class ParseError(CovkitError):
    """Malformed body or profile file; ``location`` names where parsing failed."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)
