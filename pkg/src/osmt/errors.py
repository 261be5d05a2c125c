"""Exception hierarchy shared across the toolkit.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented process exit codes (1 = configuration, 2 = data, 3 = numeric).
"""


class OsmtError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(OsmtError):
    """Invalid configuration: bad flag values, inconsistent model setup."""

    exit_code = 1


class ShapeError(ConfigError):
    """Tensor shapes do not conform to an operation's shape rule."""


class DataError(OsmtError):
    """Malformed or inconsistent input data (corpora, feature files)."""

    exit_code = 2


class EmptySegmentError(DataError):
    """A text line contains no tokenizable content."""


class NumericError(OsmtError):
    """Non-finite values where finite ones are required."""

    exit_code = 3
