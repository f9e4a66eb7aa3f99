"""Closed real intervals used to report guaranteed bounds."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def around(cls, center: float, radius: float) -> "Interval":
        return cls(center - radius, center + radius)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def issubset(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __iter__(self):
        yield self.lo
        yield self.hi
