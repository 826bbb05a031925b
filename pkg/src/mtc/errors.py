"""Exception hierarchy shared by the clustering, data and benchmark packages."""

from __future__ import annotations


class SpmtcError(Exception):
    """Base class for every error raised by this toolkit."""


class DimensionError(SpmtcError, ValueError):
    """Array shapes disagree with each other or with the owning problem."""


class InvalidInputError(SpmtcError, ValueError):
    """An argument violates an operation's precondition."""


class InvalidConfigError(SpmtcError, ValueError):
    """A configuration value is out of range or inconsistent."""


class DegenerateWeightsError(SpmtcError):
    """No example carries positive weight where at least one is required."""


class InvariantViolationError(SpmtcError):
    """Model state no longer satisfies its invariants (e.g. negative partition entries)."""


class EmptyTaskError(SpmtcError, ValueError):
    """A task has no examples."""


class DataFormatError(SpmtcError, ValueError):
    """A data file does not match its declared format or shape."""


class DataIOError(SpmtcError, OSError):
    """A file could not be read or written."""


class BenchmarkAbortedError(SpmtcError):
    """Every run of at least one benchmark method failed."""
