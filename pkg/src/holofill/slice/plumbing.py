"""The plumbing test: is there n with z - n w in M+ and z - (n+1) w in M-?"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..errors import LowerHalfPlane
from .oracle import Oracle, Verdict, slice_membership
from .reps import SurfaceKind

DEFAULT_N_RANGE = 64


class PlumbStatus(str, Enum):
    FOUND = "Found"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Probe:
    n: int
    plus: Verdict
    minus: Optional[Verdict]  # None when the first probe already failed


@dataclass(frozen=True)
class PlumbResult:
    status: PlumbStatus
    n: Optional[int] = None
    reason: str = ""
    probes: tuple = ()


def min_im_w_bound(kind) -> float:
    """Im w must exceed this for the extended representation to exist."""
    kind = SurfaceKind.parse(kind)
    return 2.0 if kind is SurfaceKind.PUNCTURED_TORUS else 1.0


def candidate_window(z: complex, w: complex, kind, n_range: int) -> range:
    """Integers n not already excluded by the necessary bound Im > 1 on both probes.

    On the torus slice, Im(z - n w) > 1 and Im((n+1) w - z) > 1 give the open
    interval ((Im z + 1)/Im w - 1, (Im z - 1)/Im w); for the sphere the bound
    is 1/2 because queries are doubled.
    """
    b = 1.0 if SurfaceKind.parse(kind) is SurfaceKind.PUNCTURED_TORUS else 0.5
    lo = (z.imag + b) / w.imag - 1
    hi = (z.imag - b) / w.imag
    n_lo = max(-n_range, math.floor(lo) + 1)
    n_hi = min(n_range, math.ceil(hi) - 1)
    return range(n_lo, n_hi + 1)


def plumbing_test(
    z: complex,
    w: complex,
    kind=SurfaceKind.PUNCTURED_TORUS,
    n_range: int = DEFAULT_N_RANGE,
    config: Optional[Oracle] = None,
    prefilter: bool = True,
) -> PlumbResult:
    """Search n in [-n_range, n_range] in increasing order.

    Found: both probes In.  Refuted: every probe resolved and none succeeded.
    Unknown: no success and at least one probe unresolved.  With
    ``prefilter`` the Im w bound and the candidate window are applied first;
    without it every n is probed.
    """
    z, w = complex(z), complex(w)
    kind = SurfaceKind.parse(kind)
    if not w.imag > 0:
        raise LowerHalfPlane("w must lie in the upper half-plane")
    if prefilter:
        if w.imag <= min_im_w_bound(kind):
            return PlumbResult(PlumbStatus.REFUTED, reason=f"Im w <= {min_im_w_bound(kind):g}")
        ns = candidate_window(z, w, kind, n_range)
    else:
        ns = range(-n_range, n_range + 1)

    probes = []
    unresolved = False
    for n in ns:
        v_plus = slice_membership(z - n * w, kind, config, "+").verdict
        if v_plus is Verdict.OUT:
            probes.append(Probe(n, v_plus, None))
            continue
        v_minus = slice_membership(z - (n + 1) * w, kind, config, "-").verdict
        probes.append(Probe(n, v_plus, v_minus))
        if v_plus is Verdict.IN and v_minus is Verdict.IN:
            return PlumbResult(PlumbStatus.FOUND, n, "both probes In", tuple(probes))
        if v_minus is not Verdict.OUT:
            unresolved = True
    if unresolved:
        return PlumbResult(PlumbStatus.UNKNOWN, reason="unresolved probes", probes=tuple(probes))
    return PlumbResult(PlumbStatus.REFUTED, reason="all probes resolved Out", probes=tuple(probes))
