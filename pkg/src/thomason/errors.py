"""Exception hierarchy.  Every error carries a stable machine-readable ``code``."""


class ThomasonError(Exception):
    code = "Error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"code": self.code, "message": str(self)}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in sorted(self.details.items())}
        return out


def _plain(value):
    if isinstance(value, (frozenset, set)):
        return sorted(str(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


def _make(name, doc):
    cls = type(name, (ThomasonError,), {"code": name, "__doc__": doc})
    return cls


CycleDetected = _make("CycleDetected", "The order relation contains a cycle.")
DuplicateId = _make("DuplicateId", "Two points share an identifier.")
UnknownPoint = _make("UnknownPoint", "A point id is not part of the poset.")
InvalidPoset = _make("InvalidPoset", "Point data is inconsistent, e.g. a singular set that is not up-closed.")
EmptySubset = _make("EmptySubset", "An operation needs a nonempty subset.")
InvalidFiltration = _make("InvalidFiltration", "Levels are not decreasing up-closed subsets.")
BudgetExceeded = _make("BudgetExceeded", "A configured work budget was exhausted.")
UnknownVariable = _make("UnknownVariable", "A polynomial mentions a variable the ring lacks.")
InhomogeneousElement = _make("InhomogeneousElement", "A graded construction received an inhomogeneous element.")
OutOfWindow = _make("OutOfWindow", "A degree outside the computed window was requested.")
WindowTooNarrow = _make("WindowTooNarrow", "The answer depends on degrees outside the window.")
InfiniteDimensionalPiece = _make("InfiniteDimensionalPiece", "A graded piece is infinite dimensional over k.")
RingMismatch = _make("RingMismatch", "Objects over different rings were combined.")
NotAChainMap = _make("NotAChainMap", "A map does not commute with the differentials.")
NotAComplex = _make("NotAComplex", "Consecutive differentials do not compose to zero.")
UndecidableSupport = _make("UndecidableSupport", "The distinguished primes cannot decide a support question.")
UnrepresentedThomasonSubset = _make("UnrepresentedThomasonSubset", "A subset has points without ideal generators.")
NotFoundInSearchBudget = _make("NotFoundInSearchBudget", "No element was found within the search budget.")
UnrepresentableLocalization = _make("UnrepresentableLocalization", "The localization needs inverting unsupported elements.")
UnsupportedFiltrationShape = _make("UnsupportedFiltrationShape", "No closed truncation formula for this filtration.")
UnsupportedRing = _make("UnsupportedRing", "The ring presentation is outside what this routine supports.")
HypothesisViolation = _make("HypothesisViolation", "Input does not satisfy the hypotheses of the obstruction.")
PreconditionError = _make("PreconditionError", "A documented precondition does not hold.")
OracleError = _make("OracleError", "A membership oracle failed.")


class ParseError(ThomasonError):
    code = "ParseError"

    def __init__(self, message, line=None, column=None):
        super().__init__(message, line=line, column=column)
        self.line = line
        self.column = column
