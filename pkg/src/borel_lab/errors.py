"""Exception hierarchy shared by all borel_lab modules."""


class BorelLabError(Exception):
    """Base class for every error raised by borel_lab."""


class NonFiniteCoefficient(BorelLabError, ValueError):
    pass


class CoefficientOverflow(BorelLabError, OverflowError):
    """n!·c_n left the binary64 range."""

    def __init__(self, n):
        super().__init__(f"n!*c_n overflows binary64 at n={n}; supply a_n/n! directly")
        self.n = n


class CatalogMiss(BorelLabError, KeyError):
    def __init__(self, name, known=()):
        msg = f"unknown catalog id {name!r}"
        if known:
            msg += f" (known: {', '.join(sorted(known))})"
        super().__init__(msg)
        self.name = name

    def __str__(self):
        return self.args[0]


class EvaluatorError(BorelLabError):
    """A transform evaluator could not produce a trustworthy value at t."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class TailNotSmall(EvaluatorError):
    pass


class CancellationLoss(EvaluatorError):
    pass


class PoleNearby(EvaluatorError):
    pass


class SingularSystem(BorelLabError, ArithmeticError):
    pass


class QuadratureError(BorelLabError):
    def __init__(self, message, u=None):
        super().__init__(message)
        self.u = u


class DepthExceeded(QuadratureError):
    pass


class NonFiniteIntegrand(QuadratureError):
    pass


class OutsideDisk(BorelLabError, ValueError):
    pass


class NotSummableHere(BorelLabError):
    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class ContourInvalid(BorelLabError, ValueError):
    pass


class NoConvergence(BorelLabError):
    pass
