"""Exception and warning types raised across the package."""


class DegenerateInput(ValueError):
    """A quantity is undefined for the given parameters (e.g. zero coherent amplitude)."""


class UnphysicalState(ValueError):
    """Covariance matrix violates the uncertainty relation det(sigma) >= 1."""


class PureStateRegion(ValueError):
    """The mixed-state QFIM was requested where the output mode is (numerically) pure."""


class NotAtPurePoint(ValueError):
    """A pure-state QFIM formula was requested where the output mode is mixed."""


class IllConditioned(ArithmeticError):
    """A spectral sum changed materially when its eigenvalue cutoff was tightened."""


class TruncationWarning(UserWarning):
    """Fock-space truncation left more probability in the top levels than allowed."""
