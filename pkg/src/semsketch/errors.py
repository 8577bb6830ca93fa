"""Shared exception types."""


class FormatError(ValueError):
    """A persisted artifact (vocabulary, table, label map, store) is malformed."""
