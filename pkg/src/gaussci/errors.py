"""Shared exception types."""

from __future__ import annotations


class GuardError(RuntimeError):
    """An input exceeds a documented size guard (would blow up exponentially)."""
