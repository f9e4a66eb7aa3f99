"""Guaranteed complex-length bounds for the core curve of a Dehn filling.

Everything here is stated in terms of the normalized length squared L^2 and
the reciprocal twist A^2 of the filling slope.  The estimates apply once
L^2 >= 8 (2 pi)^2; the rotational estimate additionally needs |A^2| >= 3.
Constants that the underlying theory leaves non-explicit (the threshold K
and length budget l0 for many cusps) are supplied by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .cusp import CuspShape
from .errors import EmptyCuspList, NonPositiveInput, NormalizedLengthTooShort, TwistTooLarge
from .interval import Interval

TWO_PI = 2 * math.pi
FILL_THRESHOLD = 8 * TWO_PI ** 2  # minimum L^2
TWIST_THRESHOLD = 3.0             # minimum |A^2|


def _check_length(L_sq: float, rel_tol: float = 0.0) -> float:
    L_sq = float(L_sq)
    if not L_sq >= FILL_THRESHOLD * (1 - rel_tol):
        raise NormalizedLengthTooShort(
            f"L^2 = {L_sq:.10g} is below the filling threshold 8(2pi)^2 = {FILL_THRESHOLD:.10g}"
        )
    return L_sq


def _check_twist(A_sq: float) -> float:
    A_sq = float(A_sq)
    if not abs(A_sq) >= TWIST_THRESHOLD:
        raise TwistTooLarge(f"|A^2| = {abs(A_sq):.6g} is below 3")
    return A_sq


def fill_length_interval(L_sq: float, rel_tol: float = 0.0) -> Interval:
    """[2pi / (L^2 + 4(2pi)^2), 2pi / (L^2 - 4(2pi)^2)] bounding l of the core curve.

    ``rel_tol`` relaxes the threshold check only; the formula is unchanged.
    """
    L_sq = _check_length(L_sq, rel_tol)
    c = 4 * TWO_PI ** 2
    return Interval(TWO_PI / (L_sq + c), TWO_PI / (L_sq - c))


def fill_length_center_error(L_sq: float, rel_tol: float = 0.0) -> tuple[float, float]:
    """Symmetric form: |l - 2pi/L^2| <= 8(2pi)^3 / (L^4 - 16(2pi)^4)."""
    L_sq = _check_length(L_sq, rel_tol)
    return TWO_PI / L_sq, 8 * TWO_PI ** 3 / (L_sq ** 2 - 16 * TWO_PI ** 4)


def theta_radius(L_sq: float, rel_tol: float = 0.0) -> float:
    L_sq = _check_length(L_sq, rel_tol)
    return 5 * TWO_PI ** 3 / (L_sq - 4 * TWO_PI ** 2) ** 2


def fill_theta_interval(L_sq: float, A_sq: float, rel_tol: float = 0.0) -> Interval:
    """2pi/A^2 +- 5(2pi)^3 / (L^2 - 4(2pi)^2)^2 bounding the rotation angle.

    A^2 = inf (untwisted cusp) gives an interval centred at 0.  Under the
    preconditions the interval always sits inside (-pi, pi], so no
    reduction modulo 2pi is needed.
    """
    r = theta_radius(L_sq, rel_tol)
    A_sq = _check_twist(A_sq)
    center = 0.0 if math.isinf(A_sq) else TWO_PI / A_sq
    iv = Interval.around(center, r)
    # guaranteed by |A^2| >= 3 and L^2 >= 8(2pi)^2
    assert -math.pi < iv.lo and iv.hi <= math.pi
    return iv


@dataclass(frozen=True)
class FillingEstimate:
    L_sq: float
    A_sq: float
    valid_fill: bool
    valid_theta: bool
    l_interval: Optional[Interval] = None
    l_center_error: Optional[tuple] = None
    theta_interval: Optional[Interval] = None


def estimate_filling_from(L_sq: float, A_sq: float, rel_tol: float = 0.0) -> FillingEstimate:
    valid_fill = L_sq >= FILL_THRESHOLD * (1 - rel_tol)
    valid_theta = valid_fill and abs(A_sq) >= TWIST_THRESHOLD
    if not valid_fill:
        return FillingEstimate(L_sq, A_sq, False, False)
    return FillingEstimate(
        L_sq,
        A_sq,
        True,
        valid_theta,
        fill_length_interval(L_sq, rel_tol),
        fill_length_center_error(L_sq, rel_tol),
        fill_theta_interval(L_sq, A_sq, rel_tol) if valid_theta else None,
    )


def estimate_filling(shape: CuspShape, rel_tol: float = 0.0) -> FillingEstimate:
    """All filling bounds applicable to ``shape``; invalidity is reported via flags."""
    return estimate_filling_from(shape.L_sq, shape.A_sq, rel_tol)


# -- drilling side -----------------------------------------------------------

def drilled_normalized_length(l_gamma: float, R: float) -> float:
    """Normalized meridian length sqrt(2pi tanh R / l) on a tube of radius R about a geodesic of length l."""
    if not (l_gamma > 0 and R > 0):
        raise NonPositiveInput("l_gamma and R must be positive")
    return math.sqrt(TWO_PI * math.tanh(R) / l_gamma)


def tube_boundary_area(alpha: float, l: float, R: float) -> float:
    """Area alpha l sinh R cosh R of the boundary of a tube of radius R.

    alpha = 0 is accepted and gives 0 (the cusped limit).
    """
    if alpha < 0 or not (l > 0 and R > 0):
        raise NonPositiveInput("need alpha >= 0, l > 0, R > 0")
    return alpha * l * math.sinh(R) * math.cosh(R)


# -- many cusps --------------------------------------------------------------

@dataclass(frozen=True)
class CuspFillRecord:
    index: int
    position: int
    L_sq_initial: float
    L_sq_guaranteed_floor: float
    l_bound_final: float


@dataclass(frozen=True)
class MultiFillPlan:
    records: tuple
    total_length_bound: float
    feasible: bool
    threshold: float


def multi_fill_plan(
    shapes: Sequence[CuspShape],
    K_prime: float,
    l_budget: float,
    order: Optional[Sequence[int]] = None,
) -> MultiFillPlan:
    """Bookkeeping for filling n cusps one after another.

    Each filling can shrink the other normalized lengths by at most a factor
    4 (L^2 by 16), so the schedule is feasible when every L_i >= 4^n K'.
    The i-th filled core curve (1-based fill position) gets length budget
    (l_budget / n) 2^(n-i) / 2^n, covering later fills that at most double it.
    ``order`` lists the input indices in fill order; default is input order.
    """
    if len(shapes) == 0:
        raise EmptyCuspList("need at least one cusp")
    if not (K_prime > 0 and l_budget > 0):
        raise NonPositiveInput("K_prime and l_budget must be positive")
    n = len(shapes)
    order = list(range(n)) if order is None else list(order)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the cusp indices")

    threshold = 4 ** n * K_prime
    feasible = all(math.sqrt(s.L_sq) >= threshold for s in shapes)
    records = []
    for pos, idx in enumerate(order, start=1):
        s = shapes[idx]
        bound = (l_budget / n) * 2 ** (n - pos) / 2 ** n if feasible else math.nan
        records.append(CuspFillRecord(idx, pos, s.L_sq, s.L_sq / 16 ** (pos - 1), bound))
    return MultiFillPlan(tuple(records), l_budget, feasible, threshold)
