"""Closeness estimates between cusp parameters, and separation checks on sampled slice data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from ..errors import EmptySamples, KappaTooSmall, NonPositiveInput
from ..filling import TWO_PI

MIN_MODULUS = 80 * TWO_PI ** 2
PROXIMITY_COEFF = 560 * TWO_PI ** 2


class ProximityResult(str, Enum):
    HYPOTHESES_FAIL = "HypothesesFail"
    CONCLUSION_HOLDS = "ConclusionHolds"
    CONCLUSION_FAILS = "ConclusionFails"


def _reciprocals(z: complex) -> tuple[float, float]:
    """(1/L^2, 1/A^2) = (2 Im z / |z|^2, 2 Re z / |z|^2); finite even when Re z = 0."""
    m2 = z.real * z.real + z.imag * z.imag
    return 2 * z.imag / m2, 2 * z.real / m2


def proximity_hypotheses(z1: complex, z2: complex) -> bool:
    """|z_i| >= 80(2pi)^2, Im z_i > 0, and the two closeness bounds on 2pi/L^2 and 2pi/A^2."""
    z1, z2 = complex(z1), complex(z2)
    if not (abs(z1) >= MIN_MODULUS and abs(z2) >= MIN_MODULUS):
        return False
    if not (z1.imag > 0 and z2.imag > 0):
        return False
    rL1, rA1 = _reciprocals(z1)
    rL2, rA2 = _reciprocals(z2)
    budget = TWO_PI ** 3 * (rL1 ** 2 + rL2 ** 2)
    return (
        TWO_PI * abs(rL1 - rL2) <= 16 * budget
        and TWO_PI * abs(rA1 - rA2) <= 20 * budget
    )


def proximity_bound(z1: complex) -> float:
    z1 = complex(z1)
    return PROXIMITY_COEFF * z1.imag / abs(z1)


def shape_proximity_check(z1: complex, z2: complex) -> ProximityResult:
    """If the hypotheses hold, test |z1 - z2| < 560 (2pi)^2 Im z1 / |z1|."""
    if not proximity_hypotheses(z1, z2):
        return ProximityResult.HYPOTHESES_FAIL
    if abs(complex(z1) - complex(z2)) < proximity_bound(z1):
        return ProximityResult.CONCLUSION_HOLDS
    return ProximityResult.CONCLUSION_FAILS


def sample_proximity_pairs(rng: np.random.Generator, count: int, max_modulus: float = 1e6) -> list:
    """Random pairs satisfying the hypotheses, by rejection inside the hypothesis box.

    In p = 2 / conj(z) coordinates (Re p = 1/A^2, Im p = 1/L^2) the hypotheses
    bound the coordinate differences.  z1 is drawn with log-uniform modulus and
    uniform argument; p2 is drawn from a box around p1 sized for Im p2 up to
    2 Im p1, then accepted only if the exact hypotheses hold.
    """
    pairs = []
    lo, hi = math.log(MIN_MODULUS), math.log(max_modulus)
    while len(pairs) < count:
        r = math.exp(rng.uniform(lo, hi))
        phi = rng.uniform(0, math.pi)
        z1 = complex(r * math.cos(phi), r * math.sin(phi))
        if not z1.imag > 0:
            continue
        p1 = 2 / z1.conjugate()
        b = TWO_PI ** 2 * 5 * p1.imag ** 2
        dre = rng.uniform(-20 * b, 20 * b)
        dim = rng.uniform(-16 * b, 16 * b)
        p2 = p1 + complex(dre, dim)
        if p2 == 0:
            continue
        z2 = 2 / p2.conjugate()
        if proximity_hypotheses(z1, z2):
            pairs.append((z1, z2))
    return pairs


# -- final threshold ---------------------------------------------------------

def component_separation_threshold(delta: float, kappa: float) -> float:
    """560 (2pi)^2 kappa / delta + 3/2; components C_n beyond it cannot accumulate."""
    if not delta > 0:
        raise NonPositiveInput("delta must be positive")
    if not kappa > MIN_MODULUS:
        raise KappaTooSmall(f"kappa must exceed 80(2pi)^2 = {MIN_MODULUS:.6g}")
    return PROXIMITY_COEFF * kappa / delta + 1.5


def separation_contradiction(n: int, delta: float, kappa: float) -> bool:
    """Whether delta/2 < 560 (2pi)^2 kappa / (2n - 3) fails, i.e. index n is ruled out."""
    if not (delta > 0 and kappa > 0):
        raise NonPositiveInput("delta and kappa must be positive")
    if 2 * n - 3 <= 0:
        return False
    return not (delta / 2 < PROXIMITY_COEFF * kappa / (2 * n - 3))


def q1_r1_proximity_predicate(q1: complex, r1: complex, delta: float, kappa: float) -> bool:
    """Both parameters high (Im >= kappa) or close (distance < delta/4)."""
    if not (delta > 0 and kappa > 0):
        raise NonPositiveInput("delta and kappa must be positive")
    q1, r1 = complex(q1), complex(r1)
    return min(q1.imag, r1.imag) >= kappa or abs(q1 - r1) < delta / 4


# -- boxes -------------------------------------------------------------------

@dataclass(frozen=True)
class BoxDecomposition:
    """Base rectangle [re_min, re_max] x [im_min, im_max] and its translates by 2n."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    delta: float
    translates: tuple = (0,)

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate rectangle")
        if not self.re_max - self.re_min < 2:
            raise ValueError("rectangle width must be less than 2")
        if not self.delta > 0:
            raise NonPositiveInput("delta must be positive")

    def contains(self, z: complex, n: int = 0) -> bool:
        x = z.real - 2 * n
        return self.re_min <= x <= self.re_max and self.im_min <= z.imag <= self.im_max

    def boundary_distance(self, z: complex, n: int = 0) -> float:
        """Distance from an interior point to the boundary of the n-th translate."""
        x = z.real - 2 * n
        return min(x - self.re_min, self.re_max - x, z.imag - self.im_min, self.im_max - z.imag)


@dataclass(frozen=True)
class BoxResult:
    separated: bool
    min_distance: float
    pair: tuple = ()  # (translate, inside point, outside point) realizing the minimum

    @property
    def label(self) -> str:
        return "Separated" if self.separated else "Violated"


def box_separation_check(
    boxes: BoxDecomposition,
    samples_in: dict,
    samples_out: Sequence[complex],
) -> BoxResult:
    """For each translate n, the minimum distance from its samples to every sample outside it.

    "Outside" means ``samples_out`` together with the samples of the other
    translates.  Separated iff every minimum exceeds ``boxes.delta``.
    """
    if not samples_in or any(len(v) == 0 for v in samples_in.values()):
        raise EmptySamples("every translate needs at least one inside sample")
    out = np.asarray(list(samples_out), dtype=complex)
    keys = sorted(samples_in)
    best = (math.inf, None)
    for n in keys:
        inside = np.asarray(list(samples_in[n]), dtype=complex)
        others = [np.asarray(list(samples_in[m]), dtype=complex) for m in keys if m != n]
        outside = np.concatenate([out] + others) if (out.size or others) else out
        if outside.size == 0:
            continue
        d = np.abs(inside[:, None] - outside[None, :])
        i, j = np.unravel_index(np.argmin(d), d.shape)
        if d[i, j] < best[0]:
            best = (float(d[i, j]), (n, complex(inside[i]), complex(outside[j])))
    if best[1] is None:
        raise EmptySamples("no outside samples to compare against")
    dist, pair = best
    return BoxResult(dist > boxes.delta, dist, pair)


def boundary_clearance(boxes: BoxDecomposition, samples_in: dict) -> float:
    """Smallest distance from any inside sample to the boundary of its translate (negative if outside)."""
    if not samples_in:
        raise EmptySamples("no samples")
    return min(boxes.boundary_distance(complex(z), n) for n, pts in samples_in.items() for z in pts)
