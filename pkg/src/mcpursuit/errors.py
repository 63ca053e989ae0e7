"""Exception types shared across the package."""


class McpError(Exception):
    pass


class BudgetError(McpError):
    """An enumeration or search would exceed the caller's hard cap."""

    def __init__(self, count, cap, what="enumeration"):
        self.count = count
        self.cap = cap
        super().__init__(f"{what} needs {count} points, exceeds cap {cap}")


class Unrepresentable(McpError):
    """The signal is outside this coder's representable set."""


class InfeasibleError(McpError):
    """A solver's feasible set is empty.  Carries the best residual seen."""

    def __init__(self, min_residual, message=None):
        self.min_residual = float(min_residual)
        super().__init__(message or f"no feasible point; min residual {self.min_residual:.6g}")


class NumericalError(McpError):
    """An iterative numerical routine failed to converge."""


class ConfigError(McpError):
    """Malformed experiment config.  Carries file/line location when known."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class CampaignError(McpError):
    """Too many per-trial failures to trust a Monte Carlo campaign."""
