"""Shared exception types.

Everything raised on purpose by this package derives from ReplabError, so
callers (and the CLI exit-code mapping) can tell deliberate failures from
bugs.
"""


class ReplabError(Exception):
    """Base class for errors raised by replab."""


class SchemaError(ReplabError):
    """A JSON document or in-memory description violates the expected shape."""


class BudgetExceededError(ReplabError):
    """An exact search was refused because the instance exceeds its size budget."""


class IncompleteStrategyError(ReplabError):
    """A strategy has no answer for a question inside the game's support."""
