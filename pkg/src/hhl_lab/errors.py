"""Exception types raised across the package.

Everything derives from :class:`HHLLabError` so callers can catch the whole
family at once.  Names mirror the failure they signal; none of them carry
extra state beyond the message.
"""

from __future__ import annotations


class HHLLabError(Exception):
    """Base class for all errors raised by hhl_lab."""


class NotHermitian(HHLLabError, ValueError):
    """Matrix fails the A = A-dagger check."""


class NoConvergence(HHLLabError, RuntimeError):
    """Eigensolver did not converge."""


class BadParameter(HHLLabError, ValueError):
    """Scalar parameter outside its allowed range (e.g. kappa <= 1)."""


class DimensionMismatch(HHLLabError, ValueError):
    """Operands have incompatible shapes."""


class NotNormalized(HHLLabError, ValueError):
    """Vector expected to have unit 2-norm does not."""


class DomainError(HHLLabError, ValueError):
    """Function argument outside its mathematical domain (e.g. lambda not in [0, 1])."""


class DegenerateInput(HHLLabError, ValueError):
    """Inputs coincide where a ratio would be 0/0."""


class InsufficientClockRegister(HHLLabError, ValueError):
    """Clock register too small: T < kappa/gamma + 1 cannot cover the spectrum."""


class ClockNotZero(HHLLabError, ValueError):
    """Clock register carries weight outside |0> where it must not."""


class FlagNotClean(HHLLabError, ValueError):
    """Flag register carries weight outside |nothing> before the filter rotation."""


class ZeroProbability(HHLLabError, RuntimeError):
    """Post-selection onto an (almost) empty subspace."""


class IllConditionedInput(HHLLabError, ValueError):
    """Input state has weight on eigenvectors below the well-conditioned cutoff."""


class BoundViolation(HHLLabError, RuntimeError):
    """A hard error-bound assertion failed; signals a bug or a counterexample."""


class FormulaMismatch(HHLLabError, RuntimeError):
    """Statevector and closed-form evaluations of the same quantity disagree."""


class ConfigError(HHLLabError, ValueError):
    """Invalid experiment configuration (CLI level)."""
