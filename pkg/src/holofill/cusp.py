"""Flat-torus geometry of a normalized rank-2 cusp.

The cusp lattice is <2, w> with meridian class w and longitude classes
2 + n w.  From w we read off the normalized length squared L^2, the
reciprocal normalized twist A^2 and the twist 1/A^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import LowerHalfPlane, OutOfFundamentalDomain, NonPositiveInput

TIE_RTOL = 1e-9


def _require_upper(w: complex) -> complex:
    w = complex(w)
    if not w.imag > 0:
        raise LowerHalfPlane("w must lie in the upper half-plane")
    return w


@dataclass(frozen=True)
class CuspShape:
    """Derived invariants of the normalized cusp with parameter ``w``.

    ``A_sq`` is ``math.inf`` when Re(w) = 0, in which case ``twist`` is exactly 0.
    ``twist`` is 1/A^2; it lies in (-1/2, 1/2] whenever |A^2| >= 2, which is
    the regime where the longitude 2 is the shortest one.
    """

    w: complex
    L_sq: float = field(init=False)
    A_sq: float = field(init=False)
    twist: float = field(init=False)

    def __post_init__(self):
        w = _require_upper(self.w)
        mod2 = w.real * w.real + w.imag * w.imag
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "L_sq", mod2 / (2 * w.imag))
        if w.real == 0:
            object.__setattr__(self, "A_sq", math.inf)
            object.__setattr__(self, "twist", 0.0)
        else:
            object.__setattr__(self, "A_sq", mod2 / (2 * w.real))
            object.__setattr__(self, "twist", 2 * w.real / mod2)

    @property
    def L(self) -> float:
        return math.sqrt(self.L_sq)


def shape_from_w(w: complex) -> CuspShape:
    return CuspShape(w)


def longitude_window(w: complex) -> int:
    """Search radius for the shortest longitude.

    |2 + n w| >= |n| Im w, and n = 0 gives length 2, so any minimizer has
    |n| <= 2 / Im w.  The window is padded to ceil(4 / Im w) + 2.
    """
    w = _require_upper(w)
    return math.ceil(4 / w.imag) + 2


def shortest_longitude(w: complex) -> tuple[int, bool]:
    """Return (n, is_unique) with 2 + n w a shortest longitude.

    On a tie (relative tolerance 1e-9) the positively oriented candidate is
    chosen, meaning the one whose component along w is positive; among
    several such, the smaller |n|, then positive n.
    """
    w = _require_upper(w)
    N = longitude_window(w)
    lengths = {n: abs(2 + n * w) for n in range(-N, N + 1)}
    best = min(lengths.values())
    ties = [n for n, v in lengths.items() if v - best <= TIE_RTOL * best]
    if len(ties) == 1:
        return ties[0], True

    def key(n):
        v = 2 + n * w
        along = (v * w.conjugate()).real
        return (0 if along > 0 else 1, abs(n), -n)

    return min(ties, key=key), False


def twist_from_marking(m: float, b: float) -> float:
    """Normalized twist b / m of a flat torus marking (meridian length m, offset b)."""
    if not m > 0:
        raise NonPositiveInput("meridian length m must be positive")
    if not (-m / 2 < b <= m / 2):
        raise OutOfFundamentalDomain("twist offset b must lie in (-m/2, m/2]")
    return b / m


@dataclass(frozen=True)
class FlatTorusMarking:
    m: float
    b: float
    area: float

    def __post_init__(self):
        if not (self.m > 0 and self.area > 0):
            raise NonPositiveInput("m and area must be positive")
        if not (-self.m / 2 < self.b <= self.m / 2):
            raise OutOfFundamentalDomain("twist offset b must lie in (-m/2, m/2]")

    @property
    def normalized_length(self) -> float:
        return self.m / math.sqrt(self.area)

    @property
    def twist(self) -> float:
        return twist_from_marking(self.m, self.b)

    @property
    def reciprocal_twist(self) -> float:
        """m / b; infinite for an untwisted marking."""
        return math.inf if self.b == 0 else self.m / self.b
