"""Maskit-slice representations, membership oracle, plumbing and separation checks."""

from .invariance import InvarianceEvidence, image_top, precise_invariance_evidence
from .oracle import (
    CertifiedRegion,
    Evidence,
    MockStripOracle,
    OracleConfig,
    SliceVerdict,
    Verdict,
    joergensen_scan,
    load_regions,
    parse_oracle,
    parse_regions,
    reduce_re,
    reduced_words,
    slice_membership,
)
from .plumbing import PlumbResult, PlumbStatus, candidate_window, min_im_w_bound, plumbing_test
from .proximity import (
    BoxDecomposition,
    BoxResult,
    ProximityResult,
    boundary_clearance,
    box_separation_check,
    component_separation_threshold,
    proximity_hypotheses,
    q1_r1_proximity_predicate,
    sample_proximity_pairs,
    separation_contradiction,
    shape_proximity_check,
)
from .reps import (
    MarkedRepresentation,
    SurfaceKind,
    extend_with_w,
    sigma_z,
    sigma_z_sphere,
    sigma_z_torus,
)
