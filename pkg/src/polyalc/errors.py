"""Shared exception bases.

Concrete errors live next to the code that raises them; the CLI maps
InputError to exit code 2 and BudgetError to exit code 3.
"""


class PolyalcError(Exception):
    pass


class InputError(PolyalcError):
    """Malformed or inconsistent input (text, JSON, signatures)."""


class BudgetError(PolyalcError):
    """A configured resource cap was exceeded. Distinct from a negative verdict."""
