"""Exception hierarchy shared by all modules."""


class BoundaryIndexError(Exception):
    """Base class for every error raised by this package."""


# -- field language ---------------------------------------------------------

class FieldSyntaxError(BoundaryIndexError, ValueError):
    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        text = message
        if position is not None:
            text = f"{message} at position {position}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)


class ArityError(BoundaryIndexError, ValueError):
    pass


class UnknownSymbol(BoundaryIndexError, ValueError):
    pass


class DomainError(BoundaryIndexError, ArithmeticError):
    def __init__(self, message, component=None):
        self.component = component
        if component is not None:
            message = f"component {component}: {message}"
        super().__init__(message)


# -- charts / zero finding --------------------------------------------------

class NotOnBoundary(BoundaryIndexError, ValueError):
    pass


class ChartRadiusTooSmall(BoundaryIndexError, ValueError):
    pass


class ConvergenceFailure(BoundaryIndexError, RuntimeError):
    pass


class AmbiguousType(BoundaryIndexError, RuntimeError):
    pass


class HypothesisViolated(BoundaryIndexError):
    """A theorem or definition precondition fails; carries witness points."""

    def __init__(self, assumption, witnesses=(), detail=""):
        self.assumption = assumption
        # round-off residue (|c| < 1e-12) is reported as an exact 0
        self.witnesses = [tuple(0.0 if abs(float(c)) < 1e-12 else float(c) for c in w) for w in witnesses]
        msg = f"hypothesis violated: {assumption}"
        if self.witnesses:
            pts = ", ".join("(" + ", ".join(f"{c:.6g}" for c in w) + ")" for w in self.witnesses)
            msg += f" at {pts}"
        if detail:
            msg += f"; {detail}"
        super().__init__(msg)


class NonIsolatedZero(HypothesisViolated):
    def __init__(self, kind, witnesses=(), detail=""):
        self.kind = kind
        super().__init__(f"zeros of kind '{kind}' are isolated", witnesses, detail)


# -- degree engine ----------------------------------------------------------

class ZeroOnSphere(BoundaryIndexError, RuntimeError):
    pass


class RefinementOverflow(BoundaryIndexError, RuntimeError):
    pass


class NotAdmissibleDirection(BoundaryIndexError, ValueError):
    pass


class NotAdmissiblePair(NotAdmissibleDirection):
    pass


class DegenerateTriangle(BoundaryIndexError, RuntimeError):
    pass


class DirectionDisagreement(BoundaryIndexError, RuntimeError):
    pass


# -- indices / doubling -----------------------------------------------------

class InadmissibleAtAllScales(BoundaryIndexError, RuntimeError):
    pass


class EquatorDisagreement(BoundaryIndexError, RuntimeError):
    pass


class ZeroOnCylinder(BoundaryIndexError, RuntimeError):
    pass


class UnsupportedDimension(BoundaryIndexError, ValueError):
    pass


class SceneError(BoundaryIndexError, ValueError):
    def __init__(self, message, line=None, path=None):
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}: "
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + message)
