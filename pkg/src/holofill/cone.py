"""Bounds along a cone-angle deformation t = alpha^2 from 0 (cusp) to (2 pi)^2 (filled).

The deformation is controlled by three quantities of the singular locus:
u, the squared normalized length of the meridian on the tube boundary; l,
the length of the singular geodesic; and R, the tube radius.  The function
h(r) = 1.69785 tanh(r) / cosh(2r) lower-bounds R from alpha l on its
decreasing branch.  The closed-form envelopes below follow from |du/dt| <= 4.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import (
    NegativeRadius,
    NonPositiveInput,
    NonPositiveRadius,
    OutOfRange,
    TooFewSteps,
)
from .filling import TWO_PI, _check_length
from .interval import Interval

H_COEFF = 1.69785
DU_COEFF = 3.3956  # twice H_COEFF, rounded as in the source estimates
DU_DT_BOUND = 4.0
Z_MIN = 0.48

# h'(r) = 0 reduces to cosh(2r) = golden ratio
R_STAR = 0.5 * math.acosh((1 + math.sqrt(5)) / 2)
H_MAX = H_COEFF * math.tanh(R_STAR) / math.cosh(2 * R_STAR)


def h(r: float) -> float:
    if r < 0:
        raise NegativeRadius("h is defined for r >= 0")
    if math.isinf(r):
        return 0.0
    return H_COEFF * math.tanh(r) / math.cosh(2 * r)


def h_inverse(a: float) -> float:
    """The r >= R_STAR with h(r) = a; ``math.inf`` for a = 0.

    Values a within rounding of H_MAX return R_STAR.
    """
    if a < 0 or a > H_MAX * (1 + 1e-12):
        raise OutOfRange(f"h_inverse needs 0 <= a <= h_max = {H_MAX:.6g}, got {a}")
    if a == 0:
        return math.inf
    if a >= H_MAX:
        return R_STAR
    hi = max(1.0, 0.5 * math.log(4 * H_COEFF / a))
    while h(hi) > a:
        hi *= 2
    return brentq(lambda r: h(r) - a, R_STAR, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps)


# -- derivative coefficient bounds -------------------------------------------

@dataclass(frozen=True)
class CoefficientBounds:
    """Bounds on the coefficients x, y of the derivative at tube radius R (scaled by 4 alpha^2)."""

    R: float
    x_interval: Interval
    y_abs_upper: float


def coefficient_bounds(R: float) -> CoefficientBounds:
    if not R > 0:
        raise NonPositiveRadius("R must be positive")
    s2 = math.sinh(R) ** 2
    c2 = math.cosh(R) ** 2
    x_lo = -(2 * s2 + 1) / (s2 * (2 * s2 + 3))
    x_hi = 1 / s2
    y = 2 * c2 / (s2 * (2 * c2 + 1))
    return CoefficientBounds(R, Interval(x_lo, x_hi), y)


def boundary_pairing_coefficients(R: float, alpha: float) -> tuple[float, float, float]:
    """(a_R, b_R, c_R) of the quadratic a_R (x^2 + y^2) + b_R x + c_R >= 0 in the coefficients x, y."""
    if not (R > 0 and alpha > 0):
        raise NonPositiveInput("R and alpha must be positive")
    th = math.tanh(R)
    s2 = math.sinh(R) ** 2
    c2 = math.cosh(R) ** 2
    a_R = -th * (2 * c2 + 1) / c2
    b_R = th / (2 * alpha ** 2 * c2 * s2)
    c_R = (th + th ** 3) / (16 * alpha ** 4 * s2 ** 2)
    return a_R, b_R, c_R


def feasibility_disc(R: float, alpha: float) -> tuple[float, float]:
    """Centre on the x-axis and radius of the disc where the pairing quadratic is >= 0."""
    a_R, b_R, c_R = boundary_pairing_coefficients(R, alpha)
    center = -b_R / (2 * a_R)
    radius = math.sqrt(b_R ** 2 - 4 * a_R * c_R) / (2 * abs(a_R))
    return center, radius


def du_dt_z_bounds(z: float) -> Interval:
    """Bounds on du/dt in terms of z = tanh R, valid for z in [0.48, 1]."""
    if not (Z_MIN <= z <= 1):
        raise OutOfRange(f"z must lie in [{Z_MIN}, 1]")
    z2 = z * z
    lo = -(1 + z2) / (DU_COEFF * z ** 3)
    hi = (1 + z2) ** 2 / (DU_COEFF * z ** 3 * (3 - z2))
    return Interval(lo, hi)


def dv_z_factor(z: float) -> float:
    """The z-dependent factor 2(1+z^2) / (1.69785 z (3z^2 - z^4)) of the dv/dalpha estimate."""
    if not (Z_MIN <= z <= 1):
        raise OutOfRange(f"z must lie in [{Z_MIN}, 1]")
    z2 = z * z
    return 2 * (1 + z2) / (H_COEFF * z * (3 * z2 - z2 * z2))


def dv_dalpha_bound(L_sq: float, rel_tol: float = 0.0) -> float:
    L_sq = _check_length(L_sq, rel_tol)
    return 5 * TWO_PI / (L_sq - 4 * TWO_PI ** 2) ** 2


# -- envelope ----------------------------------------------------------------

CSV_HEADER = ("t", "alpha", "u_lo", "u_hi", "l_lo", "l_hi", "alpha_l_max", "R_min", "v_drift")


@dataclass(frozen=True)
class ConeEnvelope:
    """Sampled envelopes; ``table`` has one row per grid point in CSV_HEADER order.

    ``v_drift`` bounds |theta(t) - alpha / A^2|, the accumulated deviation of the
    longitude's rotation from its linear model; at t = (2pi)^2 it is the
    radius of the rotation-angle interval.
    """

    L_sq: float
    steps: int
    table: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.table[:, CSV_HEADER.index(name)]

    @property
    def final(self) -> dict:
        return dict(zip(CSV_HEADER, self.table[-1]))

    def rows(self):
        for r in self.table:
            yield dict(zip(CSV_HEADER, r))

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.table:
            w.writerow([format(float(x), ".17g") for x in r])
        return buf.getvalue() if fh is None else ""


def envelope_trace(L_sq: float, steps: int = 1024, rel_tol: float = 0.0) -> ConeEnvelope:
    """Closed-form envelopes on the uniform grid of steps + 1 points in t in [0, (2pi)^2]."""
    if steps < 2:
        raise TooFewSteps("steps must be at least 2")
    L_sq = _check_length(L_sq, rel_tol)
    T = TWO_PI ** 2
    t = np.linspace(0.0, T, steps + 1)
    t[-1] = T
    alpha = np.sqrt(t)
    u_lo = L_sq - 4 * t
    u_hi = L_sq + 4 * t
    l_lo = alpha / u_hi
    l_hi = alpha / u_lo
    al_max = t / u_lo
    R_min = np.array([h_inverse(min(a, H_MAX)) for a in al_max])
    v_drift = 5 * TWO_PI * t / (L_sq - 4 * T) ** 2
    # exact endpoint values so the last row matches the filling intervals bit for bit
    l_lo[-1] = TWO_PI / (L_sq + 4 * T)
    l_hi[-1] = TWO_PI / (L_sq - 4 * T)
    v_drift[-1] = 5 * TWO_PI ** 3 / (L_sq - 4 * T) ** 2
    table = np.column_stack([t, alpha, u_lo, u_hi, l_lo, l_hi, al_max, R_min, v_drift])
    return ConeEnvelope(L_sq, steps, table)


def stepped_envelope(L_sq: float, steps: int = 1024, rel_tol: float = 0.0) -> np.ndarray:
    """Re-derive the u, l and v-drift envelopes by interval stepping.

    Starting from u(0) = L^2, each step widens u by 4 dt.  The bound on
    |v - 1/A^2| (with v = theta / alpha) grows by the dv/dalpha bound times
    d alpha, and the drift column is alpha times that bound.  All arithmetic
    is outward-rounded.  Returns an array of (u_lo, u_hi, l_lo, l_hi, v_drift)
    per grid point; it must enclose the closed forms.
    """
    from mpmath import iv

    if steps < 2:
        raise TooFewSteps("steps must be at least 2")
    L_sq = _check_length(L_sq, rel_tol)
    saved, iv.dps = iv.dps, 30
    try:
        return _step(iv, L_sq, steps)
    finally:
        iv.dps = saved


def _down(x) -> float:
    f = float(x)
    return math.nextafter(f, -math.inf) if f > x else f


def _up(x) -> float:
    f = float(x)
    return math.nextafter(f, math.inf) if f < x else f


def _step(iv, L_sq: float, steps: int) -> np.ndarray:
    T = iv.mpf(2) * iv.pi
    T = T * T
    dvda = 5 * (2 * iv.pi) / (iv.mpf(L_sq) - 4 * T) ** 2
    u = iv.mpf(L_sq)
    v = iv.mpf(0)
    alpha_prev = iv.mpf(0)
    out = np.empty((steps + 1, 5))
    for k in range(steps + 1):
        t = T * k / steps
        alpha = iv.sqrt(t)
        if k:
            du = 4 * (T / steps)
            u = iv.mpf([u.a - du.b, u.b + du.b])
            v = v + dvda * (alpha - alpha_prev)
        l_iv = alpha / u
        drift = alpha * v
        out[k] = (_down(u.a), _up(u.b), _down(l_iv.a), _up(l_iv.b), _up(drift.b))
        alpha_prev = alpha
    return out


def envelope_svg(env: ConeEnvelope, path) -> None:
    """Static line plot of the l and R envelopes (needs matplotlib)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    t = env.column("t")
    ax1.fill_between(t, env.column("l_lo"), env.column("l_hi"), alpha=0.4)
    ax1.set_xlabel("t")
    ax1.set_ylabel("l")
    ax2.plot(t[1:], env.column("R_min")[1:])
    ax2.axhline(math.asinh(math.sqrt(2)), ls="--", lw=0.8)
    ax2.set_xlabel("t")
    ax2.set_ylabel("R lower bound")
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


# -- local model forms near the singular locus -------------------------------

def standard_form_matrices(r: float) -> tuple[np.ndarray, np.ndarray]:
    """The matrices of omega_m and omega_l at distance r from the singular locus.

    Basis: (d/dr, sinh(r)^-1 d/dtheta, cosh(r)^-1 d/dz).
    """
    if not r > 0:
        raise NonPositiveRadius("r must be positive")
    s = math.sinh(r)
    c = math.cosh(r)
    off_m = -1j / (c * s)
    omega_m = np.array(
        [
            [-1 / (c * c * s * s), 0, 0],
            [0, 1 / (s * s), off_m],
            [0, off_m, -1 / (c * c)],
        ],
        dtype=complex,
    )
    off_l = -1j * s / c
    omega_l = np.array(
        [
            [-1 / (c * c), 0, 0],
            [0, -1, off_l],
            [0, off_l, (c * c + 1) / (c * c)],
        ],
        dtype=complex,
    )
    return omega_m, omega_l
