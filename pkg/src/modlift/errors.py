"""Shared exception base so the CLI can catch library errors uniformly."""


class Error(Exception):
    """Base class for all modlift errors."""
