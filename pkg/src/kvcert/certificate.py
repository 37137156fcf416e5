"""Verdicts with residual witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .ratfunc import RatFunc


@dataclass(frozen=True)
class Residual:
    label: str
    index: tuple[int, ...]
    value: RatFunc


@dataclass(frozen=True)
class Certificate:
    """Outcome of checking one identity.

    The verdict is ``holds`` exactly when ``residuals`` is empty; every
    stored residual is a nonzero rational function.
    """

    name: str
    residuals: tuple[Residual, ...] = ()
    derived: dict[str, Any] = field(default_factory=dict, compare=False)
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        for r in self.residuals:
            if r.value.is_zero():
                raise ValueError(f"zero residual stored for {r.label}{r.index}")

    @property
    def holds(self) -> bool:
        return not self.residuals

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "fails"

    def labels(self) -> set[str]:
        return {r.label for r in self.residuals}

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return f"Certificate({self.name!r}, {self.verdict}, {len(self.residuals)} residuals)"


def collect(label: str, entries: Iterable[tuple[tuple[int, ...], RatFunc]]) -> list[Residual]:
    """Keep the nonzero entries as residuals, in the order given."""
    return [Residual(label, tuple(idx), v) for idx, v in entries if not v.is_zero()]


def combine(name: str, *parts: Certificate, derived=None, notes=()) -> Certificate:
    residuals = tuple(r for p in parts for r in p.residuals)
    merged_notes = tuple(n for p in parts for n in p.notes) + tuple(notes)
    return Certificate(name, residuals, dict(derived or {}), merged_notes)
