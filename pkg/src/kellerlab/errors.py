"""Exception hierarchy shared by all kellerlab modules."""


class KellerError(Exception):
    """Base class for every error raised by kellerlab."""


class FieldMismatch(KellerError):
    pass


class IndexOutOfRange(KellerError, IndexError):
    pass


class ArityMismatch(KellerError):
    pass


class DivisionByZero(KellerError, ZeroDivisionError):
    pass


class Singular(KellerError):
    pass


class NotNilpotent(KellerError):
    pass


class ZeroVector(KellerError):
    pass


class UnsupportedGcdShape(KellerError):
    pass


class NoPolynomialInverseWithinCap(KellerError):
    pass


class CharacteristicTooSmall(KellerError):
    pass


class FieldTooSmall(KellerError):
    pass


class SearchExhausted(KellerError):
    pass


class RankMismatch(KellerError):
    pass


class VariableClash(KellerError):
    pass


class HypothesisFailed(KellerError):
    """Input violates a hypothesis of the requested procedure."""


class FieldLacksInverses(HypothesisFailed):
    """The field does not contain 1/6 (characteristic 2 or 3)."""


class Unresolved(KellerError):
    """A constructive step failed on an input that passed the hypothesis checks.

    ``trace`` holds the partial derivation log.  Such inputs are potential
    counterexamples and should be kept, not discarded.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class ProblemSyntaxError(KellerError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnknownVariable(ProblemSyntaxError):
    pass
