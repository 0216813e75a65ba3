"""Verification suites: each check group corresponds to one acceptance row.

A check records its name, an anchor naming the fact it verifies (or
"plumbing"), pass/fail, the measured residual and the tolerance used.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gallery
from .chords import chord_length_distribution, chord_set, derivative_identity_residual
from .covariogram import (
    covariogram,
    covariogram_many,
    derivative_at_zero,
    dk_map,
    gradient_fd,
    gradient_from_dk,
    lunette_identity_residual,
)
from .errors import ConfigError, UnknownSuite
from .geometry import (
    Polygon,
    difference_body,
    face,
    hausdorff,
    intersect_convex,
    nikodym,
    radial,
    rot90,
    scale,
    width,
)
from .smooth import circle, odd_perturbation
from .symmetry import (
    check_pair,
    detect_local_symmetries,
    disk_nodes,
    gc_residual,
    symmetries_match,
)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    band: float = 0.05
    jobs: int = 1
    n: int = 4096
    n_mc: int = 10**7

    def validate(self):
        if not 0 < self.band < 0.5:
            raise ConfigError(f"band must lie in (0, 0.5), got {self.band}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.n < 64 or self.n % 2:
            raise ConfigError("n must be even and >= 64")
        if self.n_mc < 1000:
            raise ConfigError("n_mc must be >= 1000")
        return self


@dataclass
class Check:
    name: str
    anchor: str
    passed: bool
    residual: float
    tolerance: float
    criterion: int = 0

    def as_dict(self):
        return {
            "name": self.name,
            "anchor": self.anchor,
            "pass": bool(self.passed),
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "criterion": self.criterion,
        }


def _le(name, anchor, residual, tol, crit):
    return Check(name, anchor, bool(residual <= tol), float(residual), float(tol), crit)


def _ge(name, anchor, value, bound, crit):
    """Lower-bound check; the residual is the measured value."""
    return Check(name, anchor, bool(value > bound), float(value), float(bound), crit)


@dataclass
class SuiteReport:
    suite_name: str
    checks: list = field(default_factory=list)
    seed: int = 42
    wall_time: float = 0.0
    config: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {
            "suite_name": self.suite_name,
            "seed": self.seed,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "wall_time": self.wall_time,
        }


# helpers ---------------------------------------------------------------------


def _random_x_in(P, rng, k, lo=0.1, hi=0.9):
    """k points s * r_P(u) * u with random direction u and s in [lo, hi]."""
    out = []
    for _ in range(k):
        a = rng.uniform(0, 2 * np.pi)
        u = np.array([np.cos(a), np.sin(a)])
        out.append(rng.uniform(lo, hi) * radial(P, u) * u)
    return np.array(out)


def _random_pentagon(rng):
    """Five points on a random ellipse, hence in strictly convex position."""
    a = np.sort(rng.uniform(0, 2 * np.pi, 5))
    while np.min(np.diff(np.concatenate([a, [a[0] + 2 * np.pi]]))) < 0.3:
        a = np.sort(rng.uniform(0, 2 * np.pi, 5))
    ax, ay = rng.uniform(0.6, 1.4, 2)
    rot = rng.uniform(0, np.pi)
    c, s = np.cos(rot), np.sin(rot)
    pts = np.column_stack([ax * np.cos(a), ay * np.sin(a)]) @ np.array([[c, s], [-s, c]])
    return Polygon(pts + rng.normal(size=2) * 0.1)


# criterion groups --------------------------------------------------------------


def crit_identities(cfg):
    """Evenness, g(o) = area, support = DK, Lipschitz bound in the Nikodym distance."""
    rng = np.random.default_rng(cfg.seed)
    even = g0 = supp = 0.0
    for _ in range(100):
        P = gallery.random_polygon(rng)
        DK = difference_body(P)
        lo, hi = DK.bounds()
        xs = lo + (hi - lo) * rng.random((10, 2))
        g = covariogram_many(P, xs)
        gm = covariogram_many(P, -xs)
        even = max(even, float(np.max(np.abs(g - gm))))
        g0 = max(g0, abs(covariogram(P, (0.0, 0.0)) - P.area))
        d = DK.boundary_distance(xs)
        inside = DK.contains(xs, tol=0.0)
        far = np.abs(d) > 1e-6
        bad = far & ((g > 0) != inside)
        supp = max(supp, float(np.count_nonzero(bad)))
    lip = -np.inf
    for _ in range(50):
        P, Q = gallery.random_polygon(rng), gallery.random_polygon(rng)
        dn = nikodym(P, Q)
        lo, hi = difference_body(P).bounds()
        xs = lo + (hi - lo) * rng.random((10, 2))
        diff = np.abs(covariogram_many(P, xs) - covariogram_many(Q, xs))
        lip = max(lip, float(np.max(diff - 2 * dn)))
    return [
        _le("evenness", "covariogram is even", even, 1e-12, 1),
        _le("value_at_origin", "g(o) equals the area", g0, 1e-12, 1),
        _le("support_mismatches", "support of g is DK", supp, 0, 1),
        _le("lipschitz_excess", "continuity in the Nikodym distance", lip, 1e-9, 1),
    ]


def crit_derivative_at_zero(cfg):
    rng = np.random.default_rng(cfg.seed + 3)
    h = 1e-4
    worst = 0.0
    for _ in range(20):
        P = gallery.random_polygon(rng)
        for a in rng.uniform(0, 2 * np.pi, 20):
            u = np.array([np.cos(a), np.sin(a)])
            worst = max(worst, abs(derivative_at_zero(P, u, h) + width(P, rot90(u))))
    return [_le("derivative_at_zero", "right derivative at o is minus the width", worst, 10 * h, 3)]


def crit_dk(cfg):
    rng = np.random.default_rng(cfg.seed + 2)
    inv = grad = lun = 0.0
    for _ in range(20):
        K = gallery.random_smooth_body(rng, n=cfg.n)
        P = K.polygon()
        DK = difference_body(P)
        c = DK.centroid
        for x in _random_x_in(Polygon(DK.vertices - c), rng, 50) + c:
            d = dk_map(P, x).dk
            inv = max(inv, float(np.linalg.norm(dk_map(P, d).dk + x)))
            grad = max(grad, float(np.linalg.norm(gradient_from_dk(P, x) - gradient_fd(P, x, 1e-5))))
            lun = max(lun, lunette_identity_residual(P, x))
    return [
        _le("dk_involution", "D_K is an involution up to sign", inv, 1e-6, 2),
        _le("gradient_rotation", "gradient of g is D_K rotated", grad, 1e-4, 2),
        _le("lunette_identity", "lunette area identity", lun, 1e-5, 2),
    ]


def _grid_in(region, k):
    lo, hi = region.bounds()
    X, Y = np.meshgrid(np.linspace(lo[0], hi[0], k), np.linspace(lo[1], hi[1], k))
    pts = np.column_stack([X.ravel(), Y.ravel()])
    return pts[region.contains(pts, tol=0.0)]


def crit_p1p2(cfg):
    P1, P2 = gallery.p1_p2()
    D1, D2 = difference_body(P1), difference_body(P2)
    u = np.array([1.0, 1.0]) / np.sqrt(2)
    f1 = sorted([face(P1, u).length, face(P1, -u).length])
    f2 = sorted([face(P2, u).length, face(P2, -u).length])
    r2 = np.sqrt(2)
    faces = max(
        abs(f1[0] - 2 * r2), abs(f1[1] - 10 * r2), abs(f2[0] - 3 * r2), abs(f2[1] - 9 * r2)
    )
    G = intersect_convex(gallery.g_region(P1), gallery.g_region(P2))
    inner = _grid_in(scale(G, 0.9), 41)
    near = np.max(np.abs(covariogram_many(P1, inner) - covariogram_many(P2, inner)))
    lo, hi = D1.bounds()
    X, Y = np.meshgrid(np.linspace(lo[0], hi[0], 101), np.linspace(lo[1], hi[1], 101))
    pts = np.column_stack([X.ravel(), Y.ravel()])
    d = D1.boundary_distance(pts)
    band = pts[(d >= 0) & (d <= 1.0) & D1.contains(pts, tol=0.0)]
    far = np.max(np.abs(covariogram_many(P1, band) - covariogram_many(P2, band)))
    return [
        _le("area_p1", "area of P1 is 314", abs(P1.area - 314), 1e-9, 4),
        _le("area_p2", "area of P2 is 314", abs(P2.area - 314), 1e-9, 4),
        _le("difference_bodies", "DP1 = DP2", hausdorff(D1, D2), 1e-9, 4),
        _le("face_lengths", "faces orthogonal to (1,1)", faces, 1e-9, 4),
        _le("gc_near_origin", "g agrees near o", near, 1e-9, 4),
        _ge("gc_differs_near_boundary", "g differs near bd DP", far, 0.5, 4),
    ]


def _fit_ts(G, u, k=6):
    r = 0.9 * radial(G, u)
    return r * np.linspace(1.0 / k, 1.0, k)


def crit_quadratic(cfg):
    rng = np.random.default_rng(cfg.seed + 5)
    worst = 0.0
    for _ in range(20):
        P = _random_pentagon(rng)
        a = rng.uniform(0, 2 * np.pi)
        u = np.array([np.cos(a), np.sin(a)])
        fit = gallery.quadratic_fit(P, u, _fit_ts(gallery.g_region(P), u))
        worst = max(worst, fit.residual)
    P1, P2 = gallery.p1_p2()
    G = intersect_convex(gallery.g_region(P1), gallery.g_region(P2))
    dc = 0.0
    for a in np.pi * np.arange(10) / 10 + 0.05:
        u = np.array([np.cos(a), np.sin(a)])
        ts = _fit_ts(G, u)
        dc = max(dc, abs(gallery.quadratic_fit(P1, u, ts).c_fit - gallery.quadratic_fit(P2, u, ts).c_fit))
    return [
        _le("quadratic_residual", "quadratic covariogram near o", worst, 1e-9, 5),
        _le("quadratic_constant_p1p2", "C depends only on the normal cones", dc, 1e-9, 5),
    ]


def crit_part4(cfg):
    K, H = gallery.part_iv_pair(n=cfg.n)
    v = check_pair(K, H, band=cfg.band)
    vt = gallery.triangle_area()
    return [
        Check("lc", "bump pair is locally coincident", v.lc, float(not v.lc), 0.0, 6),
        _le("gc_bd", "GC near bd DK", v.gc_bd_residual, 1e-3, 6),
        _ge("area_gap", "area(H) - area(K) exceeds V(T)/2", v.area_h - v.area_k, 0.5 * vt, 6),
        _ge("congruence_distance", "K and H are not congruent", v.delta_bar, 1e-2, 6),
    ]


def crit_radial_flip(cfg):
    rf = gallery.radial_flip_pair(n=cfg.n)
    v = check_pair(rf.K, rf.H, band=cfg.band)
    return [
        _le("dk_hausdorff", "flip keeps DK", v.dk_residual, 1e-6, 7),
        _le("area_equal", "flip keeps the area", abs(v.area_k - v.area_h), 1e-9, 7),
        _le(
            "radial_area_equal",
            "flip keeps the area",
            abs(rf.area_k_radial - rf.area_h_radial),
            1e-9,
            7,
        ),
        _le("gc_bd", "GC near bd DK", v.gc_bd_residual, 1e-3, 7),
        _le("gc_origin", "GC near o", v.gc_origin_residual, 1e-3, 7),
        _ge("congruence_distance", "K and H are not congruent", v.delta_bar, 1e-2, 7),
    ]


def crit_remark_flip(cfg):
    K, H = gallery.flip_remark_pair(gallery.remark_body(n=cfg.n).K, gallery.REMARK_LAYOUT["b1"])
    v = check_pair(K, H, band=cfg.band)
    PK, PH = K.polygon(), H.polygon()
    depth = cfg.band * PK.diameter()
    sk, sh = detect_local_symmetries(K), detect_local_symmetries(H)
    mid = 0.0
    for s in sk:
        for x in (s.midpoint, -s.midpoint):
            mid = max(mid, gc_residual(PK, PH, disk_nodes(x, depth)))
    return [
        _le("gc_bd", "GC near bd DK", v.gc_bd_residual, 1e-3, 8),
        _le("gc_origin", "GC near o", v.gc_origin_residual, 1e-3, 8),
        _le("gc_midpoints", "GC near symmetry midpoints", mid, 1e-3, 8),
        _le("symmetries_match", "local symmetries agree up to translation", symmetries_match(sk, sh), 1e-3, 8),
    ]


def crit_chords(cfg):
    rng = np.random.default_rng(cfg.seed + 9)
    der = ident = 0.0
    for _ in range(50):
        P = gallery.random_polygon(rng)
        a = rng.uniform(0, 2 * np.pi)
        u = np.array([np.cos(a), np.sin(a)])
        t = rng.uniform(0.05, 0.95) * radial(Polygon(difference_body(P).vertices), u)
        der = max(der, derivative_identity_residual(P, u, t))
        cs = chord_set(P, t * u)
        if not cs.empty:
            ident = max(ident, abs(covariogram(cs.kx, t * u) - covariogram(P, t * u)))
    T = gallery.default_triangle()
    hist = chord_length_distribution(T, (np.cos(0.7), np.sin(0.7)), 100)
    uni = float(np.max(np.abs(hist.mass * 100 - 1.0)))
    return [
        _le("derivative_identity", "radial derivative is minus the chord-set length", der, 1e-5, 9),
        _le("chord_set_covariogram", "g of K(x) at x equals g_K(x)", ident, 1e-10, 9),
        _le("triangle_uniform", "triangle chord lengths are uniform", uni, 1 / 100, 9),
    ]


def crit_simplex(cfg):
    v2 = gallery.simplex_scaling_check("vertex", 2, seed=cfg.seed)
    e2 = gallery.simplex_scaling_check("edge", 2, seed=cfg.seed)
    v3 = gallery.simplex_scaling_check("vertex", 3, n_mc=cfg.n_mc, seed=cfg.seed)
    c = e2.constants
    spread = float(np.max(c) / np.min(c) - 1)
    z = float(np.max(np.abs(v3.ratios - 8.0) / v3.ratio_sigma))
    return [
        _le("vertex_lambda_spread", "vertex probe independent of lambda", v2.lambda_spread, 1e-9, 10),
        _le("vertex_ratio", "vertex probe scales as t^2", float(np.max(np.abs(v2.ratios - 4.0))), 1e-6, 10),
        _le("edge_constant", "edge probe proportional to min(1 - lambda, lambda)", spread, 0.02, 10),
        _le("vertex3_ratio_sigmas", "3-D vertex probe scales as t^3", z, 3.0, 10),
    ]


def crit_symmetry(cfg):
    t1, t2 = 0.3, 0.9
    A = gallery.single_symmetry_body(t1, t2, n=cfg.n)
    rep = detect_local_symmetries(A)
    h = 2 * np.pi / cfg.n
    if len(rep) == 1:
        err = max(abs(rep[0].t1 - t1), abs(rep[0].t2 - t2))
    else:
        err = np.inf
    extra = 0
    for seed in range(5):
        B = odd_perturbation(circle(1.0, cfg.n), 0.1, cfg.seed + seed)
        extra = max(extra, len(detect_local_symmetries(B, tol=1e-6)))
    return [
        _le("single_symmetry_endpoints", "constructed symmetry is recovered", err, 2 * h, 11),
        _le("odd_perturbation_symmetries", "odd perturbations break all symmetries", extra, 0, 11),
    ]


SUITES = {
    "identities": [crit_identities, crit_derivative_at_zero],
    "dk": [crit_dk],
    "p1p2": [crit_p1p2, crit_quadratic],
    "part4": [crit_part4],
    "radial-flip": [crit_radial_flip],
    "remark-flip": [crit_remark_flip],
    "chords": [crit_chords],
    "simplex": [crit_simplex],
    "symmetry": [crit_symmetry],
}


def run_suite(name, config=None):
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = (config or SuiteConfig()).validate()
    t0 = time.perf_counter()
    groups = SUITES[name]
    if cfg.jobs > 1 and len(groups) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_call, groups, [cfg] * len(groups)))
    else:
        results = [g(cfg) for g in groups]
    checks = [c for r in results for c in r]
    cd = {"band": cfg.band, "n": cfg.n, "n_mc": cfg.n_mc}
    return SuiteReport(name, checks, cfg.seed, time.perf_counter() - t0, cd)


def _call(fn, cfg):
    return fn(cfg)
