import math

import numpy as np
import pytest

from holofill.errors import EmptySamples, KappaTooSmall, LowerHalfPlane, NonPositiveInput, NotUpperTriangular, ParseError
from holofill.moebius import IsometryKind, MoebiusClass, classify, commutator, normalize_cusp
from holofill.slice import (
    BoxDecomposition,
    Evidence,
    MockStripOracle,
    OracleConfig,
    PlumbStatus,
    ProximityResult,
    SurfaceKind,
    Verdict,
    boundary_clearance,
    box_separation_check,
    candidate_window,
    component_separation_threshold,
    extend_with_w,
    joergensen_scan,
    min_im_w_bound,
    parse_oracle,
    parse_regions,
    plumbing_test,
    precise_invariance_evidence,
    q1_r1_proximity_predicate,
    reduce_re,
    reduced_words,
    separation_contradiction,
    shape_proximity_check,
    sigma_z_sphere,
    sigma_z_torus,
    slice_membership,
)
from holofill.slice.proximity import MIN_MODULUS, PROXIMITY_COEFF

COMM = MoebiusClass(-3, -2, 2, 1)
T2 = MoebiusClass(1, 2, 0, 1)
THRESHOLD_05_3200 = 141490650.19401705  # mpmath, 40 digits


# -- representations ---------------------------------------------------------

@pytest.mark.parametrize("z", [2j, 1 + 3j, -0.3 + 0.1j])
def test_torus_identities(z):
    r = sigma_z_torus(z)
    assert abs(r.images["a"].det - 1) < 1e-15
    assert r.images["b"] == T2
    assert r.word("BAba") == COMM
    assert r.images["a"].trace == pytest.approx(1j * z)


def test_sphere_identities():
    for z in (0, 0.5 + 2j, -1 - 1j):
        r = sigma_z_sphere(z)
        assert abs(r.images["c"].det - 1) < 1e-12
        assert r.word("ab") == T2
    c0 = sigma_z_sphere(0).images["c"]
    assert c0 == MoebiusClass(-1, 0, 2, -1)
    assert classify(c0) is IsometryKind.PARABOLIC


def test_extension():
    r = extend_with_w(sigma_z_torus(1 + 3j), 3 + 5j)
    assert commutator(r.images["c"], r.images["b"]).is_identity(1e-14)
    assert normalize_cusp(r.images["b"], r.images["c"]) == pytest.approx(3 + 5j)
    s = extend_with_w(sigma_z_sphere(0.2 + 1j), 5j)
    assert s.images["d"] == MoebiusClass(1, 5j, 0, 1)
    assert commutator(s.images["d"], s.peripheral).is_identity(1e-12)
    with pytest.raises(LowerHalfPlane):
        extend_with_w(sigma_z_torus(2j), 1 - 1j)


# -- words and Joergensen ----------------------------------------------------

def test_reduced_word_counts():
    for k in range(1, 6):
        words = reduced_words(k)
        assert len(words) == sum(4 * 3 ** (j - 1) for j in range(1, k + 1))
        assert not any(p in w for w in words for p in ("aA", "Aa", "bB", "Bb"))


def test_joergensen_scan_soundness_below_slice():
    # Im z <= 1 region is known to be outside; points near the real axis are caught by parabolic b
    assert joergensen_scan(1.2j, 4) is not None
    assert joergensen_scan(1.5j, 4) is not None


def test_joergensen_scan_clean_inside():
    # deep in the slice the group is discrete, so no violation can appear
    for z in (3j, 0.5 + 4j, -0.7 + 2.5j):
        assert joergensen_scan(z, 6) is None


def test_joergensen_pair_is_genuine():
    A, B = joergensen_scan(1.5j, 6)
    r = sigma_z_torus(1.5j)
    Am, Bm = r.word(A), r.word(B)
    q = abs(Am.trace ** 2 - 4) + abs(commutator(Am, Bm).trace - 2)
    assert q < 1


# -- membership --------------------------------------------------------------

def test_necessary_bound():
    v = slice_membership(0.5 + 0.9j)
    assert v.verdict is Verdict.OUT and v.evidence is Evidence.NECESSARY_BOUND


def test_certified_region():
    cfg = OracleConfig(regions=parse_regions("-0.5 0.5 1.8 2.5 # fixture"), word_budget=4)
    v = slice_membership(2j, config=cfg)
    assert v.verdict is Verdict.IN and v.evidence is Evidence.CERTIFIED
    assert "fixture" in v.detail
    # periodic under translation by 2; boundary is excluded
    assert slice_membership(4 + 2j, config=cfg).verdict is Verdict.IN
    assert slice_membership(0.5 + 2j, config=cfg).verdict is Verdict.UNKNOWN


def test_in_requires_region_evidence():
    v = slice_membership(1.9 + 1.01j, config=OracleConfig(word_budget=8))
    assert v.verdict in (Verdict.OUT, Verdict.UNKNOWN)
    assert slice_membership(3j).verdict is Verdict.UNKNOWN


def test_heuristic_region_labelled():
    v = slice_membership(0.1 + 3j, config=OracleConfig(word_budget=3, heuristic=True))
    assert v.verdict is Verdict.IN and v.evidence is Evidence.HEURISTIC
    assert "non-rigorous" in v.detail


def test_sphere_reduction():
    cfg = OracleConfig(word_budget=3)
    assert slice_membership(0.45j, SurfaceKind.FOUR_PUNCTURED_SPHERE, cfg).verdict is Verdict.OUT
    a = slice_membership(0.3 + 1.5j, "four_punctured_sphere", cfg)
    b = slice_membership(0.6 + 3j, "punctured_torus", cfg)
    assert a == b


def test_symmetry_stability():
    cfg = OracleConfig(word_budget=4)
    rng = np.random.default_rng(0)
    for _ in range(30):
        z = complex(rng.uniform(-1, 1), rng.uniform(0.5, 3))
        v = slice_membership(z, config=cfg)
        assert slice_membership(z + 2, config=cfg).verdict is v.verdict
        assert slice_membership(z - 4, config=cfg).verdict is v.verdict
        # z in M+ iff -z in M-
        assert slice_membership(-z, config=cfg, side="-").verdict is v.verdict


def test_reduce_re():
    assert reduce_re(3 + 1j) == 1 + 1j
    assert reduce_re(-1 + 1j) == 1 + 1j
    assert reduce_re(0.25 + 1j) == 0.25 + 1j


def test_region_parse_errors():
    with pytest.raises(ParseError):
        parse_regions("0 1 2")
    with pytest.raises(ParseError):
        parse_regions("1 0 2 3")
    assert parse_regions("# only a comment\n\n") == ()


def test_parse_oracle(tmp_path):
    assert isinstance(parse_oracle("mock-strip:2.5"), MockStripOracle)
    p = tmp_path / "r.txt"
    p.write_text("0 1 2 3 # a\n")
    assert len(parse_oracle(str(p)).regions) == 1
    with pytest.raises(ParseError):
        parse_oracle(str(tmp_path / "missing.txt"))
    with pytest.raises(ParseError):
        parse_oracle("mock-strip:x")
    with pytest.raises(ValueError):
        MockStripOracle(0.5)


# -- plumbing ----------------------------------------------------------------

def test_min_im_w_bound():
    assert min_im_w_bound(SurfaceKind.PUNCTURED_TORUS) == 2
    assert min_im_w_bound(SurfaceKind.FOUR_PUNCTURED_SPHERE) == 1


def test_plumbing_mock_example():
    res = plumbing_test(10j, 3 + 7j, config=MockStripOracle(2))
    assert res.status is PlumbStatus.FOUND and res.n == 1
    brute = [
        n for n in range(-64, 65)
        if (10j - n * (3 + 7j)).imag > 2 and (-(10j - (n + 1) * (3 + 7j))).imag > 2
    ]
    assert brute[0] == 1


def test_plumbing_prefilter():
    res = plumbing_test(10j, 1 + 1.5j, config=MockStripOracle(2))
    assert res.status is PlumbStatus.REFUTED and res.probes == ()


def test_plumbing_unknown():
    res = plumbing_test(10j, 3 + 7j, config=OracleConfig(word_budget=2))
    assert res.status is PlumbStatus.UNKNOWN


def test_plumbing_translation_consistency():
    cfg = MockStripOracle(1.5)
    for z, w in ((10j, 3 + 7j), (1 + 8j, 0.5 + 4j)):
        a = plumbing_test(z, w, config=cfg)
        b = plumbing_test(z + 2, w, config=cfg)
        assert (a.status, a.n) == (b.status, b.n)


def test_plumbing_window_matches_exhaustive():
    rng = np.random.default_rng(5)
    cfg = MockStripOracle(1.5)
    for _ in range(100):
        z = complex(rng.uniform(-5, 5), rng.uniform(0, 30))
        w = complex(rng.uniform(-5, 5), rng.uniform(2.01, 10))
        a = plumbing_test(z, w, config=cfg, n_range=20)
        b = plumbing_test(z, w, config=cfg, n_range=20, prefilter=False)
        assert (a.status, a.n) == (b.status, b.n)


def test_plumbing_sphere():
    res = plumbing_test(5j, 0.5 + 3.5j, SurfaceKind.FOUR_PUNCTURED_SPHERE, config=MockStripOracle(2))
    # doubled queries reduce to the torus strip of height 2
    brute = [
        n for n in range(-64, 65)
        if (2 * (5j - n * (0.5 + 3.5j))).imag > 2 and (-2 * (5j - (n + 1) * (0.5 + 3.5j))).imag > 2
    ]
    assert res.status is PlumbStatus.FOUND and res.n == brute[0]


def test_candidate_window_bounds():
    assert list(candidate_window(10j, 3 + 7j, "punctured_torus", 64)) == [1]
    assert list(candidate_window(10j, 3 + 7j, "punctured_torus", 0)) == []


def test_plumbing_lower_half_plane():
    with pytest.raises(LowerHalfPlane):
        plumbing_test(1j, 1 - 1j)


# -- precise invariance ------------------------------------------------------

def test_invariance_vacuous():
    assert not precise_invariance_evidence([T2], T2, 0.3, 4).violation


def test_invariance_disc_examples():
    g = MoebiusClass(1, 0, 1, 1)
    ev = precise_invariance_evidence([g], T2, 0.5, 1)
    assert ev.violation and len(ev.word) == 1 and ev.top == pytest.approx(2.0)
    assert not precise_invariance_evidence([g], T2, 2.0, 1).violation


def test_invariance_monotone_in_budget():
    g = MoebiusClass(1, 0, 4, 1)
    found = None
    for k in range(1, 6):
        ev = precise_invariance_evidence([T2, g], T2, 0.2, k)
        if found is not None:
            assert ev.violation and ev.word == found
        elif ev.violation:
            found = ev.word
    assert found is not None


def test_invariance_translation_not_in_H():
    # translation by 1 is outside <z+2> and maps the horoball onto itself
    ev = precise_invariance_evidence([MoebiusClass(1, 1, 0, 1)], T2, 1.0, 1)
    assert ev.violation and math.isinf(ev.top)


def test_invariance_errors():
    with pytest.raises(NotUpperTriangular):
        precise_invariance_evidence([], MoebiusClass(1, 0, 1, 1), 1, 1)
    with pytest.raises(NonPositiveInput):
        precise_invariance_evidence([], T2, 0, 1)


# -- proximity and thresholds ------------------------------------------------

def test_proximity_examples():
    z = MIN_MODULUS * 1j * (1 + 1e-15)
    assert shape_proximity_check(z, z) is ProximityResult.CONCLUSION_HOLDS
    assert shape_proximity_check(z, 3 * z) is ProximityResult.HYPOTHESES_FAIL
    z1 = 1e4 + 1e3j
    assert shape_proximity_check(z1, z1 * (1 + 1e-6)) is ProximityResult.CONCLUSION_HOLDS
    assert shape_proximity_check(100j, 100j) is ProximityResult.HYPOTHESES_FAIL
    assert shape_proximity_check(-5000 - 5000j, -5000 - 5000j) is ProximityResult.HYPOTHESES_FAIL


def test_threshold():
    assert component_separation_threshold(0.5, 3200) == pytest.approx(THRESHOLD_05_3200, rel=1e-14)
    assert component_separation_threshold(0.5, 4000) > component_separation_threshold(0.5, 3200)
    assert component_separation_threshold(1.0, 3200) < component_separation_threshold(0.5, 3200)
    with pytest.raises(KappaTooSmall):
        component_separation_threshold(0.5, 3000)
    with pytest.raises(NonPositiveInput):
        component_separation_threshold(0, 3200)


def test_separation_contradiction():
    delta, kappa = 0.5, 3200
    n = math.ceil(component_separation_threshold(delta, kappa)) + 1
    assert separation_contradiction(n, delta, kappa)
    assert delta / 2 >= PROXIMITY_COEFF * kappa / (2 * n - 3)
    assert not separation_contradiction(1000, delta, kappa)


def test_q1_r1_predicate():
    assert q1_r1_proximity_predicate(1 + 2j, 1 + 2j, 0.4, 10)
    assert not q1_r1_proximity_predicate(1 + 2j, 1.4 + 2j, 0.4, 10)
    assert q1_r1_proximity_predicate(1 + 20j, 5 + 30j, 0.4, 10)


# -- boxes -------------------------------------------------------------------

def test_box_constructed_distance():
    d = 0.1
    box = BoxDecomposition(1.2, 2.8, 2, 4, d)
    res = box_separation_check(box, {0: [2 + 3j]}, [2 + 3j + 2 * d])
    assert res.separated and res.min_distance == pytest.approx(2 * d)


def test_box_violation():
    d = 0.1
    box = BoxDecomposition(1.2, 2.8, 2, 4, d)
    res = box_separation_check(box, {0: [2 + 3j, 2.5 + 3j]}, [2.5 + 3j + d / 2, 10j])
    assert not res.separated
    assert res.pair == (0, 2.5 + 3j, 2.5 + 3j + d / 2)


def test_box_two_strips_fixture():
    # components are blocks of the strip y in [2, 2.5] with |x| <= 0.5 (period 2);
    # the other set is the strip y in [3.5, 4]; gaps are 1 > delta
    rng = np.random.default_rng(0)
    lower = rng.uniform(-0.5, 0.5, 200) + 1j * rng.uniform(2, 2.5, 200)
    upper = rng.uniform(-0.9, 0.9, 200) + 1j * rng.uniform(3.5, 4, 200)
    box = BoxDecomposition(-0.95, 0.95, 1.9, 2.8, 0.5, (0, 1))
    inside = {0: list(lower), 1: list(lower + 2)}
    res = box_separation_check(box, inside, list(upper) + list(upper + 2))
    brute = min(abs(a - b) for a in lower for b in list(upper) + list(lower + 2))
    assert res.separated and res.min_distance == pytest.approx(brute)
    assert boundary_clearance(box, inside) > 0


def test_box_invariants():
    with pytest.raises(ValueError):
        BoxDecomposition(0, 2, 0, 1, 0.1)
    with pytest.raises(NonPositiveInput):
        BoxDecomposition(0, 1, 0, 1, 0)
    box = BoxDecomposition(0, 1, 0, 1, 0.1)
    with pytest.raises(EmptySamples):
        box_separation_check(box, {}, [1j])
    with pytest.raises(EmptySamples):
        box_separation_check(box, {0: [0.5 + 0.5j]}, [])
