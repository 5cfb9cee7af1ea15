"""Exception hierarchy for tdsim.

Each error also derives from the builtin that callers would expect for the
same situation, so ``except ValueError`` keeps working around argument checks.
"""


class TdsimError(Exception):
    """Base class for all tdsim errors."""


class ArgumentError(TdsimError, ValueError):
    """An argument violates an operation's precondition."""


class DomainError(ArgumentError):
    """A scalar lies outside the domain of a function."""


class DimensionCapError(TdsimError):
    """A register would exceed the configured qubit cap."""


class SignPolynomialError(TdsimError, RuntimeError):
    """A sign polynomial could not be certified within the degree cap."""


class DilationError(TdsimError, RuntimeError):
    """An operator could not be completed to a unitary."""


class UnsupportedChannelError(TdsimError):
    """A channel lacks the representation an operation needs."""


class InfeasibleThresholdError(ArgumentError):
    """No threshold satisfies the requested small-eigenvalue mass bound."""


class FixtureValidationError(ArgumentError):
    """Fixture parameters are inconsistent with the requested family."""
