"""Cusp shapes, Dehn filling length bounds, cone-deformation envelopes and Maskit-slice tools."""

from .cone import (
    H_MAX,
    R_STAR,
    CoefficientBounds,
    ConeEnvelope,
    coefficient_bounds,
    du_dt_z_bounds,
    dv_dalpha_bound,
    dv_z_factor,
    envelope_trace,
    feasibility_disc,
    h,
    h_inverse,
    standard_form_matrices,
    stepped_envelope,
)
from .cusp import CuspShape, FlatTorusMarking, shape_from_w, shortest_longitude, twist_from_marking
from .errors import *  # noqa: F401,F403
from .filling import (
    FILL_THRESHOLD,
    TWO_PI,
    FillingEstimate,
    MultiFillPlan,
    drilled_normalized_length,
    estimate_filling,
    fill_length_center_error,
    fill_length_interval,
    fill_theta_interval,
    multi_fill_plan,
    tube_boundary_area,
)
from .interval import Interval
from .moebius import ComplexLength, IsometryKind, MoebiusClass, complex_length, compose, normalize_cusp

__version__ = "0.1.0"
