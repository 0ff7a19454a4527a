"""Exception types shared across the package."""


class HolonomyError(Exception):
    """Base class for package errors."""


class ConfigError(HolonomyError):
    """Invalid configuration or arguments (CLI exit code 2)."""


class InvariantError(HolonomyError):
    """A structural invariant that must hold was violated (CLI exit code 3)."""


class BudgetError(HolonomyError):
    """A size or time budget was exceeded (CLI exit code 4)."""


class ProperColoringError(InvariantError):
    """An edge insertion would break the proper edge coloring."""
