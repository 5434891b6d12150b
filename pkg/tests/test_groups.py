import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orlimax import (
    Ball,
    ball_contains,
    ball_volume,
    calibrate_constants,
    dilate,
    euclidean,
    group_inv,
    group_mul,
    heisenberg1,
    hom_norm,
    identity,
)
from orlimax.fields import GridSpec, mask_from_ball
from orlimax.groups import membership_window

coords = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def h1_point(x, y, t):
    return np.array([x, y, t])


def test_euclidean_product_is_addition():
    spec = euclidean(2)
    assert np.array_equal(group_mul([1.0, 2.0], [3.0, 4.0], spec), [4.0, 6.0])


def test_heisenberg_product():
    spec = heisenberg1()
    out = group_mul(h1_point(1, 0, 0), h1_point(0, 1, 0), spec)
    assert np.allclose(out, [1.0, 1.0, 0.5], atol=0)


def test_heisenberg_identity_element():
    spec = heisenberg1()
    g = h1_point(0.3, -1.0, 2.0)
    assert np.array_equal(group_mul(g, identity(spec), spec), g)


def test_inverse_is_negation():
    spec = heisenberg1()
    assert np.array_equal(group_inv(h1_point(1, 2, 3), spec), [-1, -2, -3])
    e3 = euclidean(3)
    assert np.array_equal(group_inv([1.0, 2.0, 3.0], e3), [-1.0, -2.0, -3.0])


def test_inverse_involution():
    spec = heisenberg1()
    g = h1_point(1, 1, 1)
    assert np.array_equal(group_inv(group_inv(g, spec), spec), g)


def test_dilation_weights():
    spec = heisenberg1()
    assert np.array_equal(dilate(h1_point(1, 1, 1), 2.0, spec), [2.0, 2.0, 4.0])
    assert np.array_equal(dilate([4.0, 4.0], 0.5, euclidean(2)), [2.0, 2.0])
    g = h1_point(0.2, -0.7, 1.3)
    assert np.array_equal(dilate(g, 1.0, spec), g)


def test_dilate_rejects_nonpositive_factor():
    with pytest.raises(ValueError):
        dilate([1.0], 0.0, euclidean(1))


def test_gauge_values():
    spec = heisenberg1()
    assert hom_norm(identity(spec), spec) == 0.0
    assert hom_norm(h1_point(1, 0, 0), spec) == 1.0
    lhs = hom_norm(dilate(h1_point(1, 1, 1), 2.0, spec), spec)
    assert np.isclose(lhs, 80.0**0.25, rtol=1e-15)
    assert np.isclose(lhs, 2.0 * hom_norm(h1_point(1, 1, 1), spec), rtol=1e-14)


@given(st.lists(coords, min_size=3, max_size=3).map(np.array),
       st.lists(coords, min_size=3, max_size=3).map(np.array),
       st.lists(coords, min_size=3, max_size=3).map(np.array))
@settings(max_examples=60)
def test_heisenberg_group_axioms(g, h, k):
    spec = heisenberg1()
    left = group_mul(group_mul(g, h, spec), k, spec)
    right = group_mul(g, group_mul(h, k, spec), spec)
    assert np.allclose(left, right, atol=1e-12)
    assert np.allclose(group_mul(g, group_inv(g, spec), spec), 0.0, atol=1e-12)
    assert np.allclose(group_mul(g, identity(spec), spec), g, atol=0)


@given(st.lists(coords, min_size=3, max_size=3).map(np.array),
       st.sampled_from([0.5, 2.0, 10.0]))
@settings(max_examples=60)
def test_gauge_homogeneity_and_symmetry(g, s):
    spec = heisenberg1()
    rho = hom_norm(g, spec)
    assert abs(hom_norm(dilate(g, s, spec), spec) - s * rho) <= 1e-12 * max(s * rho, 1e-30)
    assert hom_norm(group_inv(g, spec), spec) == rho


def test_quasi_triangle_with_calibrated_constant(h1):
    rng = np.random.default_rng(3)
    g = rng.uniform(-3, 3, size=(500, 3))
    h = rng.uniform(-3, 3, size=(500, 3))
    lhs = hom_norm(group_mul(g, h, h1), h1)
    rhs = h1.c0 * (hom_norm(g, h1) + hom_norm(h, h1))
    assert np.all(lhs <= rhs * (1 + 1e-12))


def test_ball_membership():
    e1 = euclidean(1)
    assert ball_contains(Ball((0.0,), 1.0), np.array([0.0]), e1)
    assert not ball_contains(Ball((0.0,), 1.0), np.array([1.0]), e1)  # boundary
    spec = heisenberg1()
    assert ball_contains(Ball((0.0, 0.0, 0.0), 1.0), h1_point(0, 0, 0.9), spec)
    # rho(0, 0, 0.9) = 0.9**0.5 ~ 0.9487
    assert np.isclose(hom_norm(h1_point(0, 0, 0.9), spec), 0.9**0.5, rtol=1e-15)


def test_ball_volume_requires_calibration():
    with pytest.raises(ValueError):
        ball_volume(Ball((0.0,), 1.0), euclidean(1))


def test_calibrated_volumes(e1, e2, h1):
    assert abs(ball_volume(Ball((0.0,), 1.0), e1) - 2.0) < 0.02
    assert abs(ball_volume(Ball((0.0, 0.0), 2.0), e2) - 4 * np.pi) / (4 * np.pi) < 0.01
    assert abs(e2.c1 - np.pi) / np.pi < 0.01
    # quadrature oracle for the Koranyi unit ball: pi**2 / 2
    assert abs(h1.c1 - np.pi**2 / 2) / (np.pi**2 / 2) < 0.02
    assert e1.c0 == 1.0 and e2.c0 == 1.0
    assert 1.0 <= h1.c0 <= 2.0
    assert h1.c0_samples and h1.c0_samples > 10000


def test_calibration_rejects_small_resolution():
    with pytest.raises(ValueError):
        calibrate_constants(euclidean(1), resolution=16)


@pytest.mark.parametrize("maker", [lambda: euclidean(2), heisenberg1])
def test_volume_scaling_on_grids(maker):
    spec = calibrate_constants(maker(), resolution=129)
    res = 81 if spec.coord_dim == 3 else 201
    for r in (0.5, 1.0, 2.0):
        for shift in (0.0, 0.21, -0.33):
            c = np.full(spec.coord_dim, shift)
            ball = Ball(tuple(c), r)
            lo, hi = membership_window(ball, spec)
            margin = 0.05 * (hi - lo)
            grid = GridSpec(spec, tuple(lo - margin), tuple(hi + margin),
                            (res,) * spec.coord_dim)
            measured = mask_from_ball(ball, grid).measure
            expected = ball_volume(ball, spec)
            assert abs(measured - expected) / expected < 0.03


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError):
        group_mul([1.0, 2.0], [1.0], euclidean(2))
    with pytest.raises(ValueError):
        hom_norm([1.0, 2.0], heisenberg1())
