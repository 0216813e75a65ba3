import numpy as np
import pytest
from hypothesis import given, strategies as st

from covkit.errors import EpsTooLarge, NonConvexResult, NonPositiveCurvature, SampleMismatch
from covkit.geometry import Polygon, area_from_radial, hausdorff, minkowski_sum, reflect
from covkit.smooth import (
    CurvatureProfile,
    body_from_curvature,
    body_from_radial,
    circle,
    discretize,
    first_harmonic,
    grid,
    minkowski_sum_smooth,
    odd_perturbation,
    reflect_smooth,
    rotate_body,
)


def ellipse(a, b, n=4096):
    t = grid(n)
    q = a * a * np.cos(t) ** 2 + b * b * np.sin(t) ** 2
    R = (a * b) ** 2 / q**1.5
    z = np.column_stack([a * a * np.cos(t), b * b * np.sin(t)]) / np.sqrt(q)[:, None]
    return R, z


@st.composite
def profiles(draw, n=512):
    seed = draw(st.integers(0, 2**32 - 1))
    amp = draw(st.floats(0.0, 0.8))
    rng = np.random.default_rng(seed)
    t = grid(n)
    f = sum(rng.normal() / k * np.cos(k * t + rng.uniform(0, 6.3)) for k in range(1, 7))
    return 1.0 + amp * f / max(np.max(np.abs(f)), 1e-12)


def test_circle_is_round():
    C = circle(2.0, 4096, center=(1.0, -1.0))
    r = np.hypot(*(C.boundary - [1.0, -1.0]).T)
    assert np.max(np.abs(r - 2.0)) <= 1e-12
    assert C.closure_gap() <= 1e-12
    assert C.area == pytest.approx(4 * np.pi, rel=1e-5)


@pytest.mark.parametrize("a,b", [(1.0, 0.5), (2.0, 1.5)])
def test_ellipse_boundary(a, b):
    R, z = ellipse(a, b)
    E = body_from_curvature(R, base=z[0])
    assert np.max(np.linalg.norm(E.boundary - z, axis=1)) <= 1e-5
    assert E.area == pytest.approx(np.pi * a * b, rel=1e-5)


def test_area_converges_quadratically():
    R, _ = ellipse(1.0, 0.4, 256)
    e1 = abs(discretize(body_from_curvature(R), 64).area - np.pi * 0.4)
    e2 = abs(discretize(body_from_curvature(R), 128).area - np.pi * 0.4)
    assert 3.0 <= e1 / e2 <= 5.0


@given(profiles())
def test_closure_projection(R):
    B = body_from_curvature(R)
    assert B.closure_gap() <= 1e-10
    assert np.allclose(first_harmonic(B.R), 0.0, atol=1e-12)
    a, b = B.projection
    t = grid(len(R))
    assert np.allclose(B.R + a * np.cos(t) + b * np.sin(t), R)
    assert B.perimeter == pytest.approx(B.polygon().perimeter, rel=1e-4)


@given(profiles(), profiles())
def test_minkowski_sum_of_profiles(R1, R2):
    A, B = body_from_curvature(R1), body_from_curvature(R2)
    S = minkowski_sum_smooth(A, B)
    ref = minkowski_sum(A.polygon(), B.polygon())
    assert hausdorff(S.polygon(), ref) <= 1e-3


def test_minkowski_requires_same_sampling():
    with pytest.raises(SampleMismatch):
        minkowski_sum_smooth(circle(1, 64), circle(1, 128))


@given(profiles())
def test_reflection(R):
    A = body_from_curvature(R)
    assert hausdorff(reflect_smooth(A).polygon(), reflect(A.polygon())) <= 1e-9


def test_rotation_by_grid_step_is_exact():
    R, _ = ellipse(1.0, 0.6, 1024)
    A = body_from_curvature(R)
    ang = 2 * np.pi * 16 / 1024
    B = rotate_body(A, ang)
    c, s = np.cos(ang), np.sin(ang)
    rot = A.boundary @ np.array([[c, s], [-s, c]])
    assert hausdorff(B.polygon(), Polygon(rot)) <= 1e-9


def test_profile_is_read_only():
    p = CurvatureProfile(np.ones(16))
    with pytest.raises(ValueError):
        p.R[0] = 2.0
    assert p.shifted().R.shape == (16,)


def test_rejects_non_positive_profile():
    with pytest.raises(NonPositiveCurvature):
        body_from_curvature(np.concatenate([np.ones(10), [-0.1], np.ones(5)]))


def test_discretize_bounds():
    with pytest.raises(ValueError):
        discretize(circle(1, 64), 8)
    assert len(discretize(circle(1, 64), 32)) == 32


@given(st.floats(0.01, 0.9), st.integers(0, 10**6))
def test_odd_perturbation(eps, seed):
    A = circle(1.0, 1024)
    B = odd_perturbation(A, eps, seed)
    f = (B.R - A.R) / eps
    assert np.max(np.abs(f)) == pytest.approx(1.0)
    assert np.allclose(f, -np.roll(f, 512), atol=1e-12)
    assert B.closure_gap() <= 1e-10


def test_odd_perturbation_eps_bound():
    with pytest.raises(EpsTooLarge):
        odd_perturbation(circle(1.0, 256), 1.0, 0)
    with pytest.raises(EpsTooLarge):
        odd_perturbation(circle(1.0, 256), 0.0, 0)


def test_body_from_radial_reproduces_radius():
    k, e = 3, 0.05

    def r(p):
        return 1 + e * np.cos(k * p)

    def dr(p):
        return -e * k * np.sin(k * p)

    def ddr(p):
        return -e * k * k * np.cos(k * p)

    B = body_from_radial(r, dr, ddr, n=4096)
    z = B.boundary
    phi = np.arctan2(z[:, 1], z[:, 0])
    assert np.max(np.abs(np.hypot(z[:, 0], z[:, 1]) - r(phi))) <= 1e-6
    assert B.area == pytest.approx(area_from_radial(r(grid(8192))), rel=1e-6)


def test_body_from_radial_rejects_nonconvex():
    def r(p):
        return 1 + 0.3 * np.cos(5 * p)

    def dr(p):
        return -1.5 * np.sin(5 * p)

    def ddr(p):
        return -7.5 * np.cos(5 * p)

    with pytest.raises(NonConvexResult):
        body_from_radial(r, dr, ddr, n=512)
