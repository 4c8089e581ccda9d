"""Exception types shared across the package.

Every failure mode that callers are expected to catch gets its own class here.
Exceptions that refine a builtin (division by zero, bad config values) also
inherit the builtin so generic except-clauses keep working.
"""

from __future__ import annotations


class QscError(Exception):
    """Base class for all package-specific errors."""


class DivisionByZeroPoly(QscError, ZeroDivisionError):
    """Polynomial division with a zero divisor."""


class DivisionByZeroRF(QscError, ZeroDivisionError):
    """Rational-function division by the zero function."""


class PoleAtPoint(QscError):
    """Evaluation requested at a point where the denominator vanishes."""


class ParameterDomain(QscError, ValueError):
    """A structural parameter is outside the domain a check is defined for."""


class IdenticallyZeroDenominator(QscError):
    """A series denominator vanishes identically for the given parameters."""


class DenominatorNotCoprime(QscError):
    """Congruence test whose denominator shares a factor with the modulus."""


class GridPole(QscError):
    """A sample grid cannot be filled without hitting a pole."""


class GridExhausted(QscError):
    """Grid generation gave up before finding enough admissible points."""


class NotPAdicUnit(QscError):
    """Rational with p in the denominator where a p-adic unit is required."""


class ConfigError(QscError, ValueError):
    """Invalid harness configuration (unknown suite, bad range, ...)."""


# Alias used by the report writer; file-system trouble is not our domain
# so we deliberately reuse the builtin rather than wrapping it.
IoError = OSError
