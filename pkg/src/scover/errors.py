"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad word text, violated precondition,
    exceeded size guard of an oracle)."""


class BudgetError(RuntimeError):
    """A configurable search budget was exhausted before an answer was found."""


class UnsupportedAlphabetError(BudgetError):
    """The operation needs the exact maximal s-primitive length for this
    alphabet size, which is only known for up to four letters."""
