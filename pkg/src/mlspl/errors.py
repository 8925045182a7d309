"""Exception hierarchy shared across the toolkit."""
from __future__ import annotations


class MlsplError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(MlsplError):
    """Syntax error in a `.fm` source file, with 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class InvalidModelError(MlsplError):
    """A feature model violates one of its structural invariants."""


class UnknownIdError(MlsplError):
    """A referenced feature, profile, or context label does not exist."""


class GuardLimitError(MlsplError):
    """Exhaustive reasoning was requested beyond the configured size guard."""


class CardError(MlsplError):
    """Invalid model card or registry operation."""


class DuplicateCardError(CardError):
    """A card with the same (model_id, version) is already registered."""


class MonitorError(MlsplError):
    """Invalid monitor specification or trace."""


class ConfigError(MlsplError):
    """Invalid product configuration input (precondition violations)."""


class CycleError(ConfigError):
    """Component graph contains a cycle."""

    def __init__(self, nodes):
        self.nodes = sorted(nodes)
        super().__init__(f"cycle detected among components: {', '.join(self.nodes)}")


class OptimizerError(MlsplError):
    """Optimization cannot proceed (unsatisfiable model, missing candidates)."""


class DerivationError(MlsplError):
    """Product derivation or validation-suite precondition failure."""
