"""Day-indexed count series, the common currency between ingestion and fitting."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

QUANTITIES = ("cumulative_authors", "cumulative_posts", "cumulative_interactions")


@dataclass(frozen=True)
class EpiCurve:
    """A series of per-day values on a strictly increasing integer day grid.

    Ingested curves are cumulative counts and therefore non-decreasing
    integers.  Synthetic fitting targets are allowed to be real-valued and,
    for damped-exponential ground truths, non-monotone; monotonicity is a
    property of how a curve was produced, not of the container, and is
    asserted where it is guaranteed.
    """

    day: np.ndarray
    value: np.ndarray
    quantity: str = "cumulative_authors"

    def __post_init__(self):
        day = np.asarray(self.day, dtype=np.int64)
        value = np.asarray(self.value, dtype=np.float64)
        if day.ndim != 1 or value.ndim != 1:
            raise ValueError("day and value must be one-dimensional")
        if len(day) != len(value):
            raise ValueError("day and value must have equal length")
        if len(day) > 1 and not np.all(np.diff(day) > 0):
            raise ValueError("days must be strictly increasing")
        if np.any(value < 0):
            raise ValueError("values must be non-negative")
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        object.__setattr__(self, "day", day)
        object.__setattr__(self, "value", value)

    def __len__(self) -> int:
        return len(self.day)

    @property
    def is_cumulative(self) -> bool:
        """True when values are non-decreasing along the day grid."""
        return bool(np.all(np.diff(self.value) >= 0))

    def shifted(self, t0: int) -> "EpiCurve":
        """Relabel days so the first day becomes ``t0`` (values untouched)."""
        return EpiCurve(self.day - self.day[0] + t0, self.value, self.quantity)
