"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2, BudgetError -> 3.
"""


class ValidationError(ValueError):
    """Bad input: wrong dimensions, non-normalized amplitudes, out-of-range args."""


class BudgetError(RuntimeError):
    """A size cap would be exceeded; the message names the offending count."""


class ConsistencyError(RuntimeError):
    """Internal numerical invariant broken (e.g. probability below -1e-12)."""
