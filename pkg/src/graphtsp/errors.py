"""Exception types shared across the pipeline."""


class GraphTSPError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(GraphTSPError, ValueError):
    pass


class ParseError(InvalidInput):
    pass


class BadParams(InvalidInput):
    pass


class Disconnected(GraphTSPError):
    pass


class NotTwoVertexConnected(GraphTSPError):
    pass


class NotEulerian(GraphTSPError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class SupportTooLarge(GraphTSPError):
    pass


class NoCoveringBackArc(GraphTSPError):
    pass


class Infeasible(GraphTSPError):
    pass


class InvalidConfiguration(InvalidInput):
    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class BudgetInfeasible(InvalidInput):
    pass


class TooLarge(GraphTSPError):
    pass


class BoundViolation(GraphTSPError):
    """An inequality that is supposed to be a theorem failed.

    Carries the name of the inequality and both sides so the failure can be
    reported verbatim.
    """

    def __init__(self, name: str, lhs, rhs, detail: str = ""):
        msg = f"{name}: {lhs} > {rhs}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
