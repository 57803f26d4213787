"""Exception types shared across the package."""


class MalformedInput(ValueError):
    """Raised when a tree, forest, FDDS or manifest literal cannot be parsed."""

    def __init__(self, message, line=None, token=None):
        self.line = line
        self.token = token
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class MalformedPolynomial(ValueError):
    """The polynomial has no non-constant term."""


class NotPeriodic(ValueError):
    """A cut unroll tree cannot be rolled back into a component of the requested period."""


class NotSupportedNonInjective(ValueError):
    """The FDDS solver only handles polynomials with a cancelable non-constant coefficient."""


class ConstructionFailed(RuntimeError):
    """A counterexample construction did not pass its own verification."""


class LimitExceeded(ValueError):
    """An exhaustive enumeration was asked for more than it can deliver."""
