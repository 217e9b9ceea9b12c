"""Module entry point: ``python -m fregret``."""

from .cli import entry

entry()
