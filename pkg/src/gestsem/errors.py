"""Exception hierarchy shared by all gestsem modules."""

from __future__ import annotations


class GestSemError(Exception):
    """Base class for every error raised by gestsem."""


class InvalidArgument(GestSemError, ValueError):
    pass


class DegeneratePath(GestSemError, ValueError):
    pass


class ParseError(GestSemError, ValueError):
    """Malformed input. Carries a 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        self.message = message
        where = ""
        if source:
            where = source
        if line is not None:
            where += f":{line}" if where else f"line {line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}" if where else message)


class ArityError(ParseError):
    pass


class EmptyTrajectory(GestSemError, ValueError):
    pass


class AnisotropyViolation(GestSemError, ValueError):
    pass


class ModeError(GestSemError, ValueError):
    pass


class SceneReferenceError(GestSemError, LookupError):
    pass


class FrameError(GestSemError, ValueError):
    """Orienting frame is not orthonormal."""


class NoSpatialExtension(GestSemError, LookupError):
    pass


class NotFound(GestSemError, LookupError):
    pass


class LexiconError(GestSemError, ValueError):
    pass


class TypeClash(GestSemError, TypeError):
    pass


class ModeMismatch(GestSemError, ValueError):
    """Gesture mode is not in the domain of the affiliate's vector meaning."""


class ClosureError(GestSemError, ValueError):
    pass


class StaleLabel(GestSemError, ValueError):
    pass


class ResolutionMismatch(GestSemError):
    """No frame element of the affiliate can host the gesture's predicate."""

    def __init__(self, affiliate: str, predicate: str, sort: str):
        self.affiliate = affiliate
        self.predicate = predicate
        self.sort = sort
        super().__init__(
            f"mismatch: no frame element of {affiliate!r} accepts {predicate!r} of sort {sort!r}")


class AmbiguousResolution(GestSemError):
    def __init__(self, affiliate: str, predicate: str, candidates: list[str]):
        self.affiliate = affiliate
        self.predicate = predicate
        self.candidates = candidates
        super().__init__(
            f"ambiguous resolution of {predicate!r} against {affiliate!r}: "
            + ", ".join(candidates))
