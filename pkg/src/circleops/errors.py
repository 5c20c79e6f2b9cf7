"""Shared error type for numerical-degeneracy aborts (CLI exit code 3)."""

from __future__ import annotations

__all__ = ["NumericalDegeneracyError"]


class NumericalDegeneracyError(RuntimeError):
    """A run hit a state that violates a numerical invariant it relies on."""

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
