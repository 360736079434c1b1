"""Exception hierarchy shared by all modules."""


class FrontIndexError(Exception):
    """Base class for every error raised by the package."""

    code = "error"


# jets
class DivisionByZeroJet(FrontIndexError, ZeroDivisionError):
    code = "DivisionByZeroJet"


class NegativeSqrtJet(FrontIndexError, ValueError):
    code = "NegativeSqrtJet"


class OrderExhausted(FrontIndexError, ValueError):
    code = "OrderExhausted"


# surfaces
class PoleProximity(FrontIndexError):
    code = "PoleProximity"


class SingularBasePoint(FrontIndexError):
    code = "SingularBasePoint"


class NotConvex(FrontIndexError):
    code = "NotConvex"


class TangentialAffineNormal(FrontIndexError):
    code = "TangentialAffineNormal"


# morin
class NotSingular(FrontIndexError):
    code = "NotSingular"


class ZeroAdjugate(FrontIndexError):
    code = "ZeroAdjugate"


# strata
class ResolutionTooCoarse(FrontIndexError):
    code = "ResolutionTooCoarse"


class NotMorin(FrontIndexError):
    code = "NotMorin"


class DegenerateA3(NotMorin):
    code = "DegenerateA3"


class TopologyMismatch(FrontIndexError):
    """Two independent Euler characteristic computations disagree."""

    code = "TopologyMismatch"


# indexcheck
class NonIntegerDegree(FrontIndexError):
    code = "NonIntegerDegree"


class NonGenericZero(FrontIndexError):
    code = "NonGenericZero"


# cli
class ParseError(FrontIndexError):
    code = "ParseError"

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class RangeError(ParseError):
    code = "RangeError"
