"""Shared exception base so callers can catch any toolkit error at once."""


class EpinormError(Exception):
    """Base class for every error raised by epinorm modules."""
