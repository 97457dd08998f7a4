"""Exception hierarchy.

``HypothesisError`` subclasses signal that an input violates a theorem's
hypotheses (the CLI maps them to exit code 2). ``InvariantError`` signals a
bug: an exact identity that should hold by construction did not.
"""


class HypothesisError(ValueError):
    """Input does not satisfy the hypotheses of the requested construction."""


class NotEquilibrium(HypothesisError):
    """The origin is not an equilibrium of the field."""


class DivergenceNotNegative(HypothesisError):
    """The divergence of the field at the origin is not strictly negative."""


class GradientNotZeroAtOrigin(HypothesisError):
    """The potential has a nonzero gradient at the origin."""


class NotMinimum(HypothesisError):
    """The Hessian of the potential at the origin is not positive definite."""


class NotHarmonic(HypothesisError):
    """A gauge function was supplied whose Laplacian is not identically zero."""


class NotAPotential(HypothesisError):
    """A supplied potential leaves a remainder with nonzero divergence."""


class NotStrictlyOrthogonal(HypothesisError):
    """The decomposition is not strictly orthogonal."""


class NoFeasiblePoint(HypothesisError):
    """No candidate in the search keeps the potential's Hessian positive definite."""


class Diverged(RuntimeError):
    """Numerical integration left the safe region.

    ``state`` and ``time`` record the last finite state before the guard
    tripped.
    """

    def __init__(self, message, state=None, time=None):
        super().__init__(message)
        self.state = state
        self.time = time


class InvariantError(RuntimeError):
    """An exact internal identity failed; indicates a solver bug."""


class ParseError(ValueError):
    """Polynomial text could not be parsed."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.reason = message
        self.line = line
        self.column = column
