"""Exception hierarchy shared by all modules."""


class TubeKnotError(Exception):
    """Base class for all package errors."""


class InvalidPolygon(TubeKnotError):
    pass


class NotClosed(InvalidPolygon):
    pass


class SelfIntersecting(InvalidPolygon):
    pass


class OutOfTube(InvalidPolygon):
    pass


class OddLength(InvalidPolygon):
    pass


class IllegalMove(TubeKnotError):
    pass


class NotFourSection(TubeKnotError):
    pass


class ResourceLimit(TubeKnotError):
    pass


class NoConvergence(TubeKnotError):
    pass


class Overflow(TubeKnotError):
    pass


class MissingData(TubeKnotError):
    pass


class FlipOnFourBraid(TubeKnotError):
    pass


class PatternMismatch(TubeKnotError):
    pass


class TrivialInput(TubeKnotError):
    pass


class NotFound(TubeKnotError):
    """An insertion search failed where one is guaranteed to exist."""


class PreconditionViolated(TubeKnotError):
    pass


class TypeMismatch(TubeKnotError):
    pass


class Not2Section(TubeKnotError):
    pass


class Has2Sections(TubeKnotError):
    pass


class No2Section(TubeKnotError):
    pass


class InvariantViolation(TubeKnotError):
    """Internal consistency check failed."""
