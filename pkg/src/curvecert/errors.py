"""Exception types shared across the package."""


class CurveError(Exception):
    """Base class for all curvecert errors."""


class DomainError(CurveError, ValueError):
    """An argument is outside the range an operation is defined on."""


class DegenerateEdgeError(DomainError):
    """A polyline edge is too short to carry a direction."""


class IterationCapError(CurveError, RuntimeError):
    """A refinement loop exceeded its configured resource cap."""


class RegularityError(CurveError):
    """Positivity of the curve derivative could not be certified."""


class NotSimpleError(CurveError):
    """The spine curve was found to self-intersect."""


class ConstantsError(CurveError):
    """Bound ingredients are inconsistent (nonpositive denominator)."""


class RegularityNotReached(CurveError):
    """A subdivided polygon still has a zero-length edge; subdivide more."""


class ValidationError(CurveError):
    """A loaded curve violates a standing assumption (named)."""

    def __init__(self, assumption: str, detail: str = ""):
        msg = f"curve violates the {assumption} assumption"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.assumption = assumption


class ParseError(CurveError, ValueError):
    """A curve or report file is malformed."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
