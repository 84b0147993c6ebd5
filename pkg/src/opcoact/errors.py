"""Exception hierarchy shared by every module.

The CLI maps ``InputError`` to exit code 2 and ``BudgetExceeded`` to 3.
``CheckFailure`` counts as a failed check (exit 1); other mathematical
failures are never raised and appear as report content instead.
"""


class OpcoactError(Exception):
    """Base class for all library errors."""


class InputError(OpcoactError, ValueError):
    """Malformed, inconsistent or out-of-range input."""


class RingModeError(InputError):
    """Plain and graded polynomials were mixed, or the wrong mode was supplied."""


class BudgetExceeded(OpcoactError):
    """The Groebner resource guard tripped; the result would be incomplete."""


class CheckFailure(OpcoactError):
    """A mathematical precondition of an operation does not hold for its input."""


class AxiomFailure(CheckFailure):
    """An operation that needs a valid algebra received one violating its relations."""
