"""Exception hierarchy shared by every opineq module."""


class OpIneqError(Exception):
    pass


class NotSquare(OpIneqError, ValueError):
    pass


class NotHermitian(OpIneqError, ValueError):
    pass


class DimensionMismatch(OpIneqError, ValueError):
    pass


class LengthMismatch(OpIneqError, ValueError):
    pass


class ShapeMismatch(OpIneqError, ValueError):
    pass


class DomainViolation(OpIneqError, ValueError):
    pass


class ConvergenceFailure(OpIneqError, ArithmeticError):
    pass


class NotUnital(OpIneqError, ValueError):
    pass


class NotIsometry(OpIneqError, ValueError):
    pass


class UnknownFunction(OpIneqError, KeyError):
    pass


class BadParameter(OpIneqError, ValueError):
    pass


class MissingDerivative(OpIneqError, ValueError):
    pass


class NonPositiveFunction(OpIneqError, ValueError):
    pass


class UnknownClaim(OpIneqError, KeyError):
    pass


class GenerationFailure(OpIneqError, RuntimeError):
    pass


class HypothesisViolation(OpIneqError, ValueError):
    """Raised when an instance does not meet a claim's hypotheses.

    ``failed`` lists the names of the hypotheses that did not hold.
    """

    def __init__(self, claim_id, failed):
        self.claim_id = claim_id
        self.failed = list(failed)
        super().__init__(f"{claim_id}: hypotheses not met: {', '.join(self.failed)}")
