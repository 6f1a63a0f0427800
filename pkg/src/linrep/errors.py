"""Exception hierarchy shared by all linrep modules."""

from __future__ import annotations


class LinrepError(Exception):
    """Base class for every linrep-specific error."""


class FormParseError(LinrepError, ValueError):
    """A coefficient string could not be parsed into a linear form."""


class NotPrimitiveError(LinrepError):
    """The form's coefficients have a common divisor greater than 1."""


class NotPartitionRegularError(LinrepError):
    """Some non-empty subset of the coefficients sums to zero."""


class SearchSpaceTooLargeError(LinrepError):
    """The exhaustive substitution-pair search exceeds the configured cap."""


class ArityMismatchError(LinrepError, ValueError):
    """A solution tuple does not have one entry per form variable."""


class BudgetExceededError(LinrepError):
    """An enumeration would require more tuples than the caller allows."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"enumeration requires {required} tuples, budget is {budget}"
        )
        self.required = required
        self.budget = budget


class MixedSignRequiredError(LinrepError):
    """A half-line construction needs coefficients of both signs."""


class RetryExhaustedError(LinrepError):
    """Growth-constant doubling hit the retry cap.

    Sufficiently large growth constants always succeed, so this signals an
    implementation bug rather than a legitimate outcome.  The message carries
    the full retry trace.
    """


class ConstructionBugError(LinrepError):
    """A deterministic construction step failed its verification oracle.

    The difference-form builders make forced choices, so a post-step oracle
    failure cannot be retried away and is reported as a bug.
    """


class InsufficientPairsError(LinrepError):
    """The ground set does not contain enough pairs at the requested gap."""


class SequenceExhaustedError(LinrepError):
    """The supplied step-gap sequence ran out before the build finished."""


class SupplyExhaustedError(LinrepError):
    """The sequence supplier could not meet a ratio/length request."""


class PreconditionViolationError(LinrepError):
    """A builder precondition failed; `check` names the failed check."""

    def __init__(self, check: str, message: str):
        super().__init__(f"{check}: {message}")
        self.check = check


class WindowInsufficientError(LinrepError):
    """Reserved: a required value fell outside every decidable region.

    Cannot occur with the shipped target-function defaults, which assign a
    value to every integer; kept for forward compatibility of callers.
    """
