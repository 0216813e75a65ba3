import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covkit.errors import DKMismatch, OverlappingArcs
from covkit.gallery import cancel_first_moment, random_smooth_body, single_symmetry_body
from covkit.geometry import Polygon, difference_body, hausdorff, regular_polygon, reflect, translate
from covkit.smooth import (
    body_from_curvature,
    circle,
    difference_body_smooth,
    grid,
    odd_perturbation,
    reflect_smooth,
)
from covkit.symmetry import (
    check_pair,
    detect_local_symmetries,
    flip_arcs,
    lc_polygon,
    lc_smooth,
    midpoint_gradient_check,
    symmetries_match,
    t_star,
    x0_set,
)

N = 1024
H = 2 * np.pi / N


def test_circle_and_ellipse_are_centrally_symmetric():
    assert detect_local_symmetries(circle(1.0, N)).centrally_symmetric
    t = grid(N)
    E = body_from_curvature(1.0 + 0.5 * np.cos(2 * t))
    rep = detect_local_symmetries(E)
    assert rep.centrally_symmetric and len(rep) == 0


@pytest.mark.parametrize("t1,t2", [(0.3, 0.9), (1.0, 2.2), (2.5, 3.0)])
def test_single_symmetry_recovered(t1, t2):
    A = single_symmetry_body(t1, t2, n=N)
    rep = detect_local_symmetries(A)
    assert len(rep) == 1
    s = rep[0]
    assert abs(s.t1 - t1) <= 2 * H and abs(s.t2 - t2) <= 2 * H
    # the antipodal arcs are point reflections of each other about the centre
    ts = np.linspace(s.t1, s.t2, 9)
    assert np.allclose(A.z(ts) + A.z(ts + np.pi), 2 * s.center, atol=1e-9)
    assert t_star(A, 0.5 * (t1 + t2)) == pytest.approx(t2, abs=2 * H)
    assert t_star(A, t2 + 0.3) == t2 + 0.3


@given(st.integers(0, 10**6), st.floats(0.02, 0.5))
def test_odd_perturbations_have_no_symmetry(seed, eps):
    B = odd_perturbation(circle(1.0, N), eps, seed)
    assert len(detect_local_symmetries(B, tol=1e-6)) == 0


def test_x0_set_is_symmetric():
    A = single_symmetry_body(n=N)
    xs = x0_set(A)
    assert len(xs) == 2 and np.allclose(xs[0], -xs[1])


def _arc(seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, np.pi)
    return a, a + rng.uniform(0.1, 2.5)


@settings(max_examples=10)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_flip_preserves_difference_body(body_seed, arc_seed):
    K = random_smooth_body(np.random.default_rng(body_seed), n=N)
    Hb = flip_arcs(K, [_arc(arc_seed)])
    D1, D2 = difference_body_smooth(K), difference_body_smooth(Hb)
    assert np.max(np.abs(D1.boundary - D2.boundary)) <= 1e-8
    # the Minkowski sum of the inscribed polygons agrees to discretisation order
    assert hausdorff(difference_body(K.polygon()), difference_body(Hb.polygon())) <= 1e-5


def test_flip_with_balanced_arc_is_locally_coincident():
    # an odd profile part with zero first moment on the arc closes without
    # any global correction, so the profiles agree exactly off the arc
    t = grid(N)
    bump = np.where(np.abs(t - 1.0) < 0.4, np.cos(np.pi * (t - 1.0) / 0.8) ** 4, 0.0)
    f = bump * np.cos(t - 1.0) - np.roll(bump * np.cos(t - 1.0), N // 2)
    f = cancel_first_moment(f, t, np.abs(f))
    K = body_from_curvature(1.0 + 0.3 * f)
    Hb = flip_arcs(K, [(0.5, 1.5)])
    assert Hb.projection == pytest.approx((0.0, 0.0), abs=1e-12)
    assert lc_smooth(K, Hb)


def test_flip_rejects_overlap():
    with pytest.raises(OverlappingArcs):
        flip_arcs(circle(1.0, N), [(0.0, 3.5)])


def test_flip_of_everything_is_reflection():
    K = random_smooth_body(np.random.default_rng(3), n=N)
    Hb = flip_arcs(K, [(0.0, np.pi - H)])
    assert np.allclose(Hb.R, reflect_smooth(K).R)


def test_lc_fails_for_unrelated_bodies():
    A = random_smooth_body(np.random.default_rng(1), n=N)
    B = random_smooth_body(np.random.default_rng(2), n=N)
    assert not lc_smooth(A, B)
    assert not lc_smooth(A, circle(1.0, 2 * N))


def test_lc_polygon():
    P = regular_polygon(5)
    assert lc_polygon(P, translate(P, (1.0, 2.0)))
    assert lc_polygon(P, reflect(P))
    T = Polygon(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    assert not lc_polygon(P, T)


def test_check_pair_on_translate():
    K = random_smooth_body(np.random.default_rng(5), n=N)
    v = check_pair(K, K.translated((0.3, -0.2)), grid_n=41, origin_n=11)
    assert v.dk_equal and v.gc_bd and v.gc_origin and v.lc and v.congruent
    assert v.delta_bar <= 1e-7
    d = v.as_dict()
    assert isinstance(d["lc"], bool) and d["band"] == 0.05


def test_midpoint_gradient_check():
    K = random_smooth_body(np.random.default_rng(6), n=N)
    assert midpoint_gradient_check(K, reflect_smooth(K), 0.2, [0.5, 1.0, 2.0]) <= 1e-9
    other = random_smooth_body(np.random.default_rng(7), n=N)
    with pytest.raises(DKMismatch):
        midpoint_gradient_check(K, other, 0.2, [0.5])


def test_symmetries_match_counts():
    A = single_symmetry_body(n=N)
    assert symmetries_match(detect_local_symmetries(A), detect_local_symmetries(A)) == 0.0
    assert symmetries_match(detect_local_symmetries(A), []) == np.inf
