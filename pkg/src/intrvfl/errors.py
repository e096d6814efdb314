"""Exception types shared across the package."""


class IntRvflError(Exception):
    """Base class for all errors raised by this package."""


class DataError(IntRvflError):
    """A dataset file or dataset content is unusable (parse failures,
    degenerate label sets, classes too small for the requested folds)."""


class ConfigError(IntRvflError):
    """A configuration value is invalid or internally inconsistent."""
