import math

import numpy as np
import pytest

from holofill.cusp import (
    CuspShape,
    FlatTorusMarking,
    longitude_window,
    shape_from_w,
    shortest_longitude,
    twist_from_marking,
)
from holofill.errors import LowerHalfPlane, OutOfFundamentalDomain


def brute_force_longitude(w, N=100):
    lengths = [(abs(2 + n * w), n) for n in range(-N, N + 1)]
    return min(lengths)[1]


def test_shape_pure_imaginary():
    s = shape_from_w(2j)
    assert s.L_sq == 1
    assert s.twist == 0
    assert math.isinf(s.A_sq)


def test_shape_diagonal():
    s = shape_from_w(2 + 2j)
    assert s.L_sq == 2 and s.A_sq == 2


def test_shape_mirror():
    s = shape_from_w(-2 + 2j)
    assert s.L_sq == 2 and s.A_sq == -2


def test_shape_reference_values():
    s = shape_from_w(50 + 2j)
    assert s.L_sq == pytest.approx(626.0, rel=1e-15)
    assert s.A_sq == pytest.approx(25.04, rel=1e-15)
    assert s.twist == pytest.approx(1 / 25.04, rel=1e-14)


def test_lower_half_plane_rejected():
    with pytest.raises(LowerHalfPlane, match="upper half-plane"):
        shape_from_w(1 - 2j)
    with pytest.raises(LowerHalfPlane):
        CuspShape(3 + 0j)


def test_mirror_symmetry_grid():
    rng = np.random.default_rng(0)
    for _ in range(200):
        w = complex(rng.uniform(-50, 50), rng.uniform(0.01, 50))
        a, b = shape_from_w(w), shape_from_w(-w.conjugate())
        assert a.L_sq == pytest.approx(b.L_sq, rel=1e-15)
        assert a.A_sq == pytest.approx(-b.A_sq, rel=1e-15)


@pytest.mark.parametrize("w", [10 + 4j, 3 + 3j, 4 + 0.2j])
def test_shortest_longitude_examples(w):
    assert shortest_longitude(w) == (0, True)
    assert brute_force_longitude(w) == 0


def test_shortest_longitude_exact_tie():
    # |2| = |2 - (2+2i)| = 2; 2 has positive component along w
    assert shortest_longitude(2 + 2j) == (0, False)
    # mirror: |2| = |2 + (-2+2i)|; here 2 + w = 2i is the one along w
    assert shortest_longitude(-2 + 2j) == (1, False)


def test_shortest_longitude_matches_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(500):
        w = complex(rng.uniform(-20, 20), rng.uniform(0.05, 10))
        n, unique = shortest_longitude(w)
        if unique:
            assert n == brute_force_longitude(w)
        assert abs(n) <= longitude_window(w)


def test_large_twist_gives_trivial_longitude():
    rng = np.random.default_rng(2)
    count = 0
    for _ in range(2000):
        w = complex(rng.uniform(-30, 30), rng.uniform(0.05, 30))
        if abs(shape_from_w(w).A_sq) > 2:
            count += 1
            assert shortest_longitude(w) == (0, True)
    assert count > 100


def test_lattice_invariant_under_shift():
    w = 1.3 + 0.7j
    for k in (-2, 1, 3):
        a = sorted(round(abs(2 + n * w), 9) for n in range(-40, 41))
        shifted = w + 2 * k
        # 2 + n (w + 2k) = 2 (1 + n k) + n w is another lattice vector; compare the lattice norms
        lat = sorted(round(abs(2 * m + n * w), 9) for m in range(-200, 201) for n in range(-40, 41))
        lat_shift = sorted(round(abs(2 * m + n * shifted), 9) for m in range(-200, 201) for n in range(-40, 41))
        small = [x for x in lat if x < 20]
        small_shift = [x for x in lat_shift if x < 20]
        assert small == small_shift
        assert a[0] in small


@pytest.mark.parametrize("m, b, expected", [(4, 1, 0.25), (4, 2, 0.5), (4, 0, 0.0)])
def test_twist_from_marking(m, b, expected):
    assert twist_from_marking(m, b) == expected


def test_twist_from_marking_domain():
    with pytest.raises(OutOfFundamentalDomain):
        twist_from_marking(4, -2)
    with pytest.raises(OutOfFundamentalDomain):
        twist_from_marking(4, 3)


def test_flat_torus_marking():
    t = FlatTorusMarking(4, 1, 16)
    assert t.normalized_length == 1
    assert t.twist == 0.25
    assert t.reciprocal_twist == 4
    assert math.isinf(FlatTorusMarking(4, 0, 16).reciprocal_twist)
