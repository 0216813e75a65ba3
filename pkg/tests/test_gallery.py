import numpy as np
import pytest
from hypothesis import given, strategies as st

from covkit import gallery
from covkit.errors import ConeViolation, OutsideG, PreconditionUnmet
from covkit.gallery import (
    REMARK_LAYOUT,
    cancel_first_moment,
    check_cone,
    default_triangle,
    flip_remark_pair,
    odd_extend,
    p1_p2,
    part_iv_pair,
    plateau_packet,
    quadratic_fit,
    radial_flip_pair,
    raised_cosine,
    remark_body,
    simplex_scaling_check,
    support_packet,
)
from covkit.geometry import difference_body, face, hausdorff, intersect_convex
from covkit.smooth import grid
from covkit.symmetry import detect_local_symmetries, lc_polygon, lc_smooth

DEG = np.pi / 180


def moment(f, t):
    return abs(np.sum(f * np.exp(1j * t)))


# P1 / P2 ---------------------------------------------------------------------------


def test_p1_p2_areas_and_difference_bodies():
    P1, P2 = p1_p2()
    # 20^2 minus the cut triangles (10^2 + 2^2 + 2^2 + 8^2) / 2 = 400 - 86
    assert P1.area == pytest.approx(314.0, abs=1e-9)
    assert P2.area == pytest.approx(314.0, abs=1e-9)
    assert hausdorff(difference_body(P1), difference_body(P2)) <= 1e-9
    assert hausdorff(P1, P2) > 0.5


def test_p1_p2_faces():
    P1, P2 = p1_p2()
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    r2 = np.sqrt(2)
    assert sorted([face(P1, u).length, face(P1, -u).length]) == pytest.approx([2 * r2, 10 * r2])
    assert sorted([face(P2, u).length, face(P2, -u).length]) == pytest.approx([3 * r2, 9 * r2])


def test_p1_p2_corner_convention():
    P1, _ = p1_p2()
    # the cut of leg 10 at (10, 10) runs from (10, 0) to (0, 10)
    v = {tuple(np.round(p, 9)) for p in P1.vertices}
    assert (10.0, 0.0) in v and (0.0, 10.0) in v
    assert len(P1) == 8


def test_p1_p2_locally_coincident_but_not_congruent():
    # every corner is a right or 135 degree cone, so LC holds for the
    # polygons even though g differs near bd DP (they are not strictly convex)
    P1, P2 = p1_p2()
    assert lc_polygon(P1, P2)


def test_g_region_contains_origin_and_has_area():
    P1, P2 = p1_p2()
    G = intersect_convex(gallery.g_region(P1), gallery.g_region(P2))
    assert G.contains(np.zeros((1, 2)))[0]
    assert G.area > 1.0


# quadratic fit ---------------------------------------------------------------------


@given(st.floats(0.0, 2 * np.pi))
def test_quadratic_fit_on_square(unit_square, a):
    u = np.array([np.cos(a), np.sin(a)])
    fit = quadratic_fit(unit_square, u, [0.05, 0.1, 0.15])
    assert fit.c_fit == pytest.approx(abs(np.cos(a) * np.sin(a)), abs=1e-9)
    assert fit.residual <= 1e-12


def test_quadratic_fit_outside_g(unit_square):
    with pytest.raises(OutsideG):
        quadratic_fit(unit_square, (1.0, 0.3), [0.5, 0.9])


def test_quadratic_constant_equal_for_p1_p2():
    P1, P2 = p1_p2()
    for a in [0.1, 0.8, 2.0]:
        u = np.array([np.cos(a), np.sin(a)])
        ts = [0.1, 0.2, 0.3]
        f1, f2 = quadratic_fit(P1, u, ts), quadratic_fit(P2, u, ts)
        assert f1.c_fit == pytest.approx(f2.c_fit, abs=1e-9)


# profile building blocks -----------------------------------------------------------


@given(st.integers(0, 10**6))
def test_cancel_first_moment(seed):
    rng = np.random.default_rng(seed)
    t = grid(512)
    f = rng.normal(size=512)
    w = raised_cosine(t, rng.uniform(0, 6), 1.5)
    g = cancel_first_moment(f, t, w)
    assert moment(g, t) <= 1e-9
    assert np.array_equal(g[w == 0], f[w == 0])


def test_packets_have_no_moment():
    t = grid(4096)
    sp = support_packet(t, 0.6, 0.9, 0.5)
    assert np.max(np.abs(sp)) == pytest.approx(0.5)
    assert moment(sp, t) * 2 * np.pi / 4096 <= 1e-8
    pp = plateau_packet(t, (1.5, 1.9), (2.2, 2.6), 0.02)
    plateau = (t > 1.9 + 1e-3) & (t < 2.2 - 1e-3)
    outside = (t < 1.5) | (t > 2.6)
    assert np.max(np.abs(pp[plateau])) <= 1e-12
    assert np.max(np.abs(pp[outside])) <= 1e-12
    # the sampled packet keeps an O(h^2) moment, removed by cancel_first_moment
    assert moment(pp, t) * 2 * np.pi / 4096 <= 1e-5


def test_odd_extend():
    t = grid(64)
    f = np.where(t < np.pi, np.sin(t) ** 2, 0.0)
    g = odd_extend(f, t)
    assert np.allclose(g, -np.roll(g, 32))


# bump pair -------------------------------------------------------------------------


def _mixed_area(RA, RB):
    """V(A, B) = (1/2) int h_A dS_B with A integrated from its profile."""
    n = len(RA)
    t = grid(n)
    h = 2 * np.pi / n
    e = np.exp(1j * (t + np.pi / 2))
    z = np.concatenate([[0], np.cumsum(0.5 * (RA * e + np.roll(RA * e, -1)) * h)[:-1]])
    hA = (z * np.exp(-1j * t)).real
    return 0.5 * np.sum(hA * RB) * h


def test_part_iv_pair_structure():
    n = 2048
    K, H = part_iv_pair(n=n)
    assert lc_smooth(K, H)
    t = grid(n)
    R1 = sum(raised_cosine(t, c, np.pi / 24) for c in gallery.TRIANGLE_NORMALS)
    R2 = sum(raised_cosine(t, c + np.pi / 18, np.pi / 24) for c in gallery.TRIANGLE_NORMALS)
    R1, R2 = cancel_first_moment(R1, t, R1), cancel_first_moment(R2, t, R2)
    expected = 2 * (_mixed_area(R1, np.roll(R2, -n // 2)) - _mixed_area(R1, R2))
    assert H.area - K.area == pytest.approx(expected, abs=1e-4)
    assert H.area - K.area > 0.5 * gallery.triangle_area()


def test_part_iv_pair_validation():
    with pytest.raises(ValueError):
        part_iv_pair(bump_width=0.2, rotation=0.1)
    with pytest.raises(ValueError):
        part_iv_pair(bump_width=0.7)


# radial flip -----------------------------------------------------------------------


def test_radial_flip_pair():
    rf = radial_flip_pair(n=2048)
    assert lc_smooth(rf.K, rf.H)
    assert rf.area_k_radial == pytest.approx(rf.area_h_radial, abs=1e-12)
    assert abs(rf.K.area - rf.H.area) <= 1e-9
    with pytest.raises(ValueError):
        radial_flip_pair(u1=0.0, u2=0.5)
    with pytest.raises(ValueError):
        radial_flip_pair(dent_depth=0.2)


# three-symmetry flip ---------------------------------------------------------------


def test_remark_body_symmetries():
    rb = remark_body(n=2048)
    syms = detect_local_symmetries(rb.K)
    assert len(syms) == 3
    a2, c, a1 = syms
    h = 2 * np.pi / 2048
    assert abs(a2.t1 - REMARK_LAYOUT["b1"][1]) <= 2 * h
    assert np.allclose(a1.center, a2.center, atol=1e-6)
    assert np.linalg.norm(c.center - a1.center) == pytest.approx(rb.meta["shift"], rel=0.2)


def test_flip_remark_preconditions():
    rb = remark_body(n=2048)
    with pytest.raises(PreconditionUnmet):
        flip_remark_pair(rb.K, (20 * DEG, 40 * DEG))
    with pytest.raises(PreconditionUnmet):
        flip_remark_pair(rb.K, REMARK_LAYOUT["ramp1"])
    K, H = flip_remark_pair(rb.K, rb.b1)
    assert lc_smooth(K, H)


# simplex probes --------------------------------------------------------------------


def test_cone_checks():
    T = default_triangle()
    v = T.vertices
    inward = (v.mean(axis=0) - v[0]) / np.linalg.norm(v.mean(axis=0) - v[0])
    check_cone(T, v[0], -inward, "vertex")
    with pytest.raises(ConeViolation):
        check_cone(T, v[0], inward, "vertex")
    with pytest.raises(ConeViolation):
        check_cone(T, v[0] + 0.1, -inward, "vertex")
    with pytest.raises(ConeViolation):
        check_cone(T, v[0] + 0.1, -inward, "edge")


def test_two_dimensional_vertex_probe():
    r = simplex_scaling_check("vertex", 2)
    assert r.lambda_spread <= 1e-9
    assert np.allclose(r.ratios, 4.0, atol=1e-6)


def test_two_dimensional_edge_probe():
    r = simplex_scaling_check("edge", 2, lambdas=(0.2, 0.4, 0.5, 0.8), ts=[1e-3, 2e-3])
    assert np.max(r.constants) / np.min(r.constants) - 1 <= 0.02


def test_three_dimensional_vertex_probe_small_sample():
    r = simplex_scaling_check("vertex", 3, lambdas=(0.5,), n_mc=10**6, seed=3)
    assert abs(r.ratios[0, 0] - 8.0) <= 3 * r.ratio_sigma[0, 0]


@pytest.mark.parametrize("kind", ["vertex", "edge"])
def test_probe_values_match_shapely(kind):
    shapely = pytest.importorskip("shapely.geometry")
    T = default_triangle()
    v = T.vertices
    p = v[0] if kind == "vertex" else 0.5 * (v[0] + v[1])
    u = -(v.mean(axis=0) - p) / np.linalg.norm(v.mean(axis=0) - p)
    lam = 0.3
    probe = gallery.SimplexProbe(lam, T, p, u, [0.01, 0.02], kind)
    vals, _ = gallery.probe_values(probe)
    for t, val in zip(probe.ts, vals):
        x = p - t * u
        A = shapely.Polygon((1 - lam) * v)
        B = shapely.Polygon(-lam * v + x)
        assert val == pytest.approx(A.intersection(B).area, abs=1e-14)


def test_prism_mc_check():
    P1, _ = p1_p2()
    est, err, exact = gallery.prism_mc_check(P1, (3.0, -2.0, 0.5), n=10**5, seed=1)
    assert abs(est - exact) <= 3 * err
