"""Exception hierarchy.

Every error carries a stable ``code`` used by the CLI for its machine-parsable
``E:<code>:`` prefix.  User errors (bad input files, invalid moves, invalid
annuli) exit with status 1; ``InternalInvariantBroken`` signals a bug in this
package, never a user mistake, and exits with status 2.
"""


class FlypeError(Exception):
    code = "Error"

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return f"{self.code}: {self.message}" if self.message else self.code


# --- diagram validation -------------------------------------------------

class DiagramError(FlypeError):
    code = "DiagramError"


class EmptySet(DiagramError):
    code = "EmptySet"


class ColumnCountMismatch(DiagramError):
    code = "ColumnCountMismatch"


class RowCountMismatch(DiagramError):
    code = "RowCountMismatch"


class CoincidentVertices(DiagramError):
    code = "CoincidentVertices"


class OutOfRangeValue(DiagramError):
    code = "OutOfRangeValue"


class GridSyntaxError(FlypeError):
    code = "SyntaxError"


class CutThroughVertex(FlypeError):
    code = "CutThroughVertex"


# --- moves ---------------------------------------------------------------

class NotAnElementaryMove(FlypeError):
    code = "NotAnElementaryMove"


class InvalidResult(FlypeError):
    code = "InvalidResult"


# --- annuli --------------------------------------------------------------

class CurveError(FlypeError):
    code = "CurveError"


class SlopeViolation(CurveError):
    code = "SlopeViolation"


class AnnulusInvalid(FlypeError):
    code = "AnnulusInvalid"


class BoundaryHitsCrossing(AnnulusInvalid):
    code = "BoundaryHitsCrossing"

    def __init__(self, point, message=""):
        super().__init__(message or f"boundary passes through crossing {point}")
        self.point = point


class ForbiddenPair(AnnulusInvalid):
    code = "ForbiddenPair"

    def __init__(self, u, v, axis, message=""):
        super().__init__(message or f"forbidden pair {u}, {v} on one {axis}")
        self.u = u
        self.v = v
        self.axis = axis


class NotInterior(FlypeError):
    code = "NotInterior"


class Outside(FlypeError):
    code = "Outside"


class CannotPerturb(FlypeError):
    code = "CannotPerturb"


class NotContained(FlypeError):
    code = "NotContained"


# --- invariants / search -------------------------------------------------

class TooManyCrossings(FlypeError):
    code = "TooManyCrossings"


class InternalInvariantBroken(FlypeError):
    """A proposition of the underlying theory failed at runtime: a bug here."""

    code = "InternalInvariantBroken"
