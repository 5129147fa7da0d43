"""Exception hierarchy shared across the toolkit."""


class DeteconError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(DeteconError):
    """An input violates a documented precondition.

    ``field`` names the offending parameter so callers (CLI, HTTP service)
    can point at it.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class PricingModeError(DeteconError):
    """Operation applied to a profile in the wrong pricing mode."""


class NoBreakEvenError(DeteconError):
    """Per-image margin is zero or negative: supervised never catches up."""


class NoCrossoverError(DeteconError):
    """Accuracy-adjusted margin is zero or negative: no CCD crossover exists."""


class UndefinedMetricError(DeteconError):
    """A metric is undefined for the given inputs (zero accuracy, zero spread)."""


class InsufficientStratumError(DeteconError):
    """A stratum holds fewer images than its sampling target."""

    def __init__(self, stratum: str, available: int, requested: int):
        super().__init__(
            f"stratum '{stratum}' holds {available} images, "
            f"{requested} requested (short by {requested - available})"
        )
        self.stratum = stratum
        self.available = available
        self.requested = requested
