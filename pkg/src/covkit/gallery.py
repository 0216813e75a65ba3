"""Explicit constructions: polygon pairs, smooth counterexample pairs and probes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .covariogram import (
    Prism,
    Simplex,
    covariogram,
    covariogram_mc,
    cross_covariogram,
    prism_covariogram,
)
from .errors import ConeViolation, OutsideG, PreconditionUnmet
from .geometry import (
    Polygon,
    area_from_radial,
    as_vector,
    convex_hull,
    difference_body,
    intersect_convex,
    rot90,
    scale,
    width,
)
from .smooth import DEFAULT_N, SmoothBody, body_from_curvature, body_from_radial, grid
from .symmetry import detect_local_symmetries, flip_arcs

DEG = np.pi / 180


# random bodies --------------------------------------------------------------


def random_polygon(rng, m=20, box=1.0):
    """Convex hull of m uniform points in [-box, box]^2."""
    return convex_hull(rng.uniform(-box, box, (m, 2)))


def random_smooth_body(rng, n=DEFAULT_N, modes=6, amp=0.5):
    """Body with R = 1 + random harmonics 2..modes, kept positive."""
    t = grid(n)
    R = np.ones(n)
    for k in range(2, modes + 1):
        a, b = rng.normal(size=2) / k
        R += a * np.cos(k * t) + b * np.sin(k * t)
    R = 1 + amp * (R - 1) / np.max(np.abs(R - 1))
    return body_from_curvature(R, base=rng.normal(size=2) * 0.1)


# polygons -------------------------------------------------------------------

P1_CUTS = {(1, 1): 10.0, (-1, 1): 2.0, (-1, -1): 2.0, (1, -1): 8.0}
P2_CUTS = {(1, 1): 9.0, (-1, 1): 1.0, (-1, -1): 3.0, (1, -1): 9.0}


def cut_square(cuts, half=10.0):
    """[-half, half]^2 with isosceles corners of leg length cuts[(i, j)] removed.

    The corner (i, j) is the point (half*i, half*j).
    """
    pts = []
    for i, j in [(1, -1), (1, 1), (-1, 1), (-1, -1)]:
        a = cuts[(i, j)]
        c = np.array([half * i, half * j])
        pts.append(c - np.array([0.0, j * a]))
        pts.append(c - np.array([i * a, 0.0]))
    return convex_hull(np.array(pts))


def p1_p2():
    return cut_square(P1_CUTS), cut_square(P2_CUTS)


def g_region(P):
    """Intersection of DT over triangles T of consecutive vertices of P."""
    v = P.vertices
    m = len(v)
    out = None
    for i in range(m):
        T = Polygon(np.array([v[i - 1], v[i], v[(i + 1) % m]]))
        DT = difference_body(T)
        out = DT if out is None else intersect_convex(out, DT)
    return out


@dataclass
class QuadraticFit:
    direction: np.ndarray
    c_fit: float
    normal_cone_pair: tuple
    residual: float


def _vertex_cone(P, w):
    """Edge directions at the vertex (or edge) of P maximising <., w>."""
    v = P.vertices
    h = v @ w
    k = int(np.argmax(h))
    e = P.edges
    return (tuple(np.round(e[k - 1], 12)), tuple(np.round(e[k], 12)))


def quadratic_fit(P, u, ts):
    """Fit g_P(t u) = V(P) - t w_P(R_{pi/2} u) + C t^2 by least squares."""
    u = as_vector(u)
    u = u / np.linalg.norm(u)
    ts = np.asarray(ts, dtype=float)
    G = g_region(P)
    pts = ts[:, None] * u
    if G is None or not np.all(G.contains(pts, tol=1e-12)):
        raise OutsideG("probe points must lie in G(P)")
    w = width(P, rot90(u))
    y = np.array([covariogram(P, p) for p in pts]) - P.area + ts * w
    C = float(np.dot(y, ts**2) / np.dot(ts**2, ts**2))
    res = float(np.max(np.abs(y - C * ts**2)))
    cones = (_vertex_cone(P, rot90(u)), _vertex_cone(P, -rot90(u)))
    return QuadraticFit(u, C, cones, res)


# smooth building blocks -----------------------------------------------------


def raised_cosine(t, center, width_):
    """Unit-mass raised-cosine bump of full support width ``width_``."""
    d = np.angle(np.exp(1j * (t - center)))
    out = (1 + np.cos(2 * np.pi * d / width_)) / width_
    return np.where(np.abs(d) < width_ / 2, out, 0.0)


def _first_moment(f, t):
    return np.sum(f * np.exp(1j * t))


def cancel_first_moment(f, t, w):
    """f + w*(a cos t + b sin t) with (a, b) making the discrete first moment zero.

    The correction lives on the support of the window ``w``, so profiles
    stay untouched elsewhere and closure needs no global projection.
    """
    m0 = _first_moment(f, t)
    mc = _first_moment(w * np.cos(t), t)
    ms = _first_moment(w * np.sin(t), t)
    A = np.array([[mc.real, ms.real], [mc.imag, ms.imag]])
    a, b = np.linalg.solve(A, -np.array([m0.real, m0.imag]))
    return f + w * (a * np.cos(t) + b * np.sin(t))


def odd_extend(f_half, t):
    """Extend a function supported in [0, pi) by f(t + pi) = -f(t)."""
    n = len(t)
    return f_half - np.roll(f_half, n // 2)


# bump pair ------------------------------------------------------------------

TRIANGLE_NORMALS = np.array([-90.0, 30.0, 150.0]) * DEG


def part_iv_pair(bump_width=np.pi / 24, rotation=np.pi / 18, n=DEFAULT_N):
    """K = K1 + K2 + B^2 and H = K1 - K2 + B^2 built from curvature profiles.

    K1 has length-measure density the sum of three unit-mass bumps of full
    width ``bump_width`` at the edge normals of a unit regular triangle; K2
    is K1 rotated by ``rotation``.  Supports are disjoint when
    rotation > bump_width and rotation + bump_width < pi/3.
    """
    if not 0 < bump_width < np.pi / 6:
        raise ValueError("bump_width must lie in (0, pi/6)")
    if not bump_width < rotation < np.pi / 3 - bump_width:
        raise ValueError("bump supports of K1 and K2 overlap")
    t = grid(n)
    R1 = sum(raised_cosine(t, c, bump_width) for c in TRIANGLE_NORMALS)
    R2 = sum(raised_cosine(t, c + rotation, bump_width) for c in TRIANGLE_NORMALS)
    # the sampled bumps leave a tiny first moment; cancel it on their supports
    R1 = cancel_first_moment(R1, t, R1)
    R2 = cancel_first_moment(R2, t, R2)
    R2r = np.roll(R2, -(n // 2))
    K = body_from_curvature(R1 + R2 + 1.0)
    H = body_from_curvature(R1 + R2r + 1.0)
    return K, H


def triangle_area():
    return np.sqrt(3) / 4


# radial-flip pair -----------------------------------------------------------


@dataclass
class RadialFlip:
    K: SmoothBody
    H: SmoothBody
    u1: tuple
    u2: tuple
    depth: float
    area_k_radial: float
    area_h_radial: float


def _dent(phi, center, half, depth):
    d = np.angle(np.exp(1j * (phi - center)))
    inside = np.abs(d) < half
    k = np.pi / half
    r = np.where(inside, 0.5 * depth * (1 + np.cos(k * d)), 0.0)
    dr = np.where(inside, -0.5 * depth * k * np.sin(k * d), 0.0)
    ddr = np.where(inside, -0.5 * depth * k * k * np.cos(k * d), 0.0)
    return r, dr, ddr


def dented_disk_radial(centers, half, depth):
    """Radius function 1 - sum of raised-cosine dents, with two derivatives."""

    def parts(phi):
        acc = [np.ones_like(phi), np.zeros_like(phi), np.zeros_like(phi)]
        for c in centers:
            r, dr, ddr = _dent(phi, c, half, depth)
            acc[0] = acc[0] - r
            acc[1] = acc[1] - dr
            acc[2] = acc[2] - ddr
        return acc

    return (lambda p: parts(p)[0]), (lambda p: parts(p)[1]), (lambda p: parts(p)[2])


def radial_flip_pair(dent_depth=0.03, u1=0.0, u2=np.pi / 2, half_width=0.42, n=DEFAULT_N, m_radial=None):
    """Unit disk with dents over U1, U2, and its flip across ±U1.

    U_i is the arc of directions within ``half_width`` of ``u_i``.  H has
    r_H(u) = r_K(-u) on ±U1 and r_H = r_K elsewhere; on a disk with
    C^1 dents the normal-angle zone of a dent equals its direction arc,
    so H is obtained by flipping the curvature profile there.
    """
    if not 0 < dent_depth <= 0.05:
        raise ValueError("dent_depth must lie in (0, 0.05]")
    arcs = [(u1 - half_width, u1 + half_width), (u2 - half_width, u2 + half_width)]
    sep = min(abs(np.angle(np.exp(1j * (u1 - u2)))), abs(np.angle(np.exp(1j * (u1 - u2 - np.pi)))))
    if sep <= 2 * half_width or half_width >= np.pi / 2:
        raise ValueError("±U1, ±U2 must be disjoint")
    r, dr, ddr = dented_disk_radial([u1, u2], half_width, dent_depth)
    K0 = body_from_radial(r, dr, ddr, n=n)
    # resampling leaves each dent with a small first moment; cancel it inside
    # the dent so the flip needs no global closure correction
    t = grid(n)
    R = np.ones(n)
    for c in (u1, u2):
        zone = np.abs(np.angle(np.exp(1j * (t - c)))) < half_width
        f = np.where(zone, K0.R - 1.0, 0.0)
        R += cancel_first_moment(f, t, raised_cosine(t, c, 2 * half_width))
    K = body_from_curvature(R, base=K0.base)
    H = flip_arcs(K, [arcs[0]])
    m = m_radial or 8 * n
    phi = grid(m)
    rk = r(phi)
    inside = np.abs(np.angle(np.exp(1j * (phi - u1)))) < half_width
    inside |= np.abs(np.angle(np.exp(1j * (phi - u1 - np.pi)))) < half_width
    rh = np.where(inside, np.roll(rk, m // 2), rk)
    return RadialFlip(
        K, H, arcs[0], arcs[1], dent_depth, area_from_radial(rk), area_from_radial(rh)
    )


# single-symmetry and three-symmetry bodies ----------------------------------


def _odd_window(t, a, b, amp):
    """Odd profile that vanishes exactly on [a, b] (mod pi) with linear onset.

    On J = (b, a + pi) it is -amp*sin(pi s), s the normalised position in J,
    and on J + pi the negative.  The first moment is cancelled by an odd
    modulation with the even window |f|, which keeps the zero set.
    """
    L = a + np.pi - b
    s = np.mod(t - b, 2 * np.pi) / L
    on = (s > 0) & (s < 1)
    s2 = np.mod(t - b - np.pi, 2 * np.pi) / L
    on2 = (s2 > 0) & (s2 < 1)
    f = np.zeros_like(t)
    f[on] = -np.sin(np.pi * s[on])
    f[on2] = np.sin(np.pi * s2[on2])
    return amp * cancel_first_moment(f, t, np.abs(f))


def single_symmetry_body(t1=0.3, t2=0.9, amp=0.3, n=DEFAULT_N):
    """Body with tau(t) = tau(t + pi) exactly for t in [t1, t2] (mod pi) only."""
    t = grid(n)
    R = 1.0 + 0.1 * np.cos(2 * t) + _odd_window(t, t1, t2, amp)
    return body_from_curvature(R)


@dataclass
class RemarkBody:
    K: SmoothBody
    a1: tuple
    a2: tuple
    b1: tuple
    c: tuple
    meta: dict = field(default_factory=dict)


REMARK_LAYOUT = {
    "b1": (5 * DEG, 60 * DEG),
    "ramp1": (85 * DEG, 110 * DEG),
    "ramp2": (125 * DEG, 150 * DEG),
}


def support_packet(t, center, width_, peak):
    """phi'' + phi for phi = A cos^4(pi (t - center) / width_) on its support.

    This is the curvature change produced by adding phi to the support
    function; its first moment is zero and it is C^1.  ``A`` is chosen so
    the packet's largest absolute value equals ``peak``.
    """
    d = np.angle(np.exp(1j * (t - center)))
    k = np.pi / width_
    inside = np.abs(d) < width_ / 2
    c, s_ = np.cos(k * d), np.sin(k * d)
    shape = 4 * k * k * (3 * c**2 * s_**2 - c**4) + c**4
    shape = np.where(inside, shape, 0.0)
    return peak * shape / np.max(np.abs(shape))


def _smoothstep(x):
    """C^2 step 0 -> 1 on [0, 1] with its first two derivatives."""
    x = np.clip(x, 0.0, 1.0)
    s = x**3 * (10 - 15 * x + 6 * x * x)
    ds = 30 * x * x * (1 - x) ** 2
    d2s = 60 * x * (1 - x) * (1 - 2 * x)
    return s, ds, d2s


def plateau_packet(t, rise, fall, amp):
    """phi'' + phi for phi = amp cos(t - beta) s(t).

    ``s`` climbs from 0 to 1 on ``rise``, stays 1 in between and drops back
    on ``fall``; beta is the middle of the plateau.  On the plateau phi is
    the support function of a translation, so the packet vanishes there and
    the arc between the ramps is shifted rigidly by ``amp``.
    """
    d = np.mod(t - rise[0], 2 * np.pi)
    w1, w2 = rise[1] - rise[0], fall[1] - fall[0]
    s1, ds1, dds1 = _smoothstep(d / w1)
    s2, ds2, dds2 = _smoothstep((d - (fall[0] - rise[0])) / w2)
    ds = ds1 / w1 * (1 - s2) - s1 * ds2 / w2
    dds = dds1 / w1**2 * (1 - s2) - 2 * ds1 * ds2 / (w1 * w2) - s1 * dds2 / w2**2
    beta = 0.5 * (rise[1] + fall[0])
    return amp * (-2 * np.sin(t - beta) * ds + np.cos(t - beta) * dds)


def remark_body(amp=0.7, shift=0.025, n=DEFAULT_N):
    """Body with two co-centred local symmetries A1, A2 and a third one C.

    Two odd packets on the half circle: a compact support-function packet
    in B1 (flipping it changes the shape by a controlled amount) and a
    plateau packet whose ramps make up B2.  The arc C between the ramps is
    symmetric about a centre moved by ``shift``; A1 and A2 keep the origin.
    """
    t = grid(n)
    lay = REMARK_LAYOUT
    b1, r1, r2 = lay["b1"], lay["ramp1"], lay["ramp2"]
    f1 = support_packet(t, 0.5 * (b1[0] + b1[1]), b1[1] - b1[0], amp)
    f1 = cancel_first_moment(f1, t, np.abs(f1))
    f2 = plateau_packet(t, r1, r2, shift)
    f2 = cancel_first_moment(f2, t, np.abs(f2))
    K = body_from_curvature(1.0 + odd_extend(f1 + f2, t))
    a2 = (b1[1], r1[0])
    c = (r1[1], r2[0])
    a1 = (r2[1], b1[0] + np.pi)
    return RemarkBody(K, a1, a2, b1, c, {"amp": amp, "shift": shift})


def _mod_pi_close(a, b, tol):
    d = np.mod(a - b + np.pi / 2, np.pi) - np.pi / 2
    return abs(d) <= tol


def flip_remark_pair(K=None, b1=None, tol=None):
    """(K, H) with H obtained from K by flipping B1 and its antipode B3.

    B1 must separate two local symmetries of K with a common centre.
    """
    if K is None:
        rb = remark_body()
        K, b1 = rb.K, rb.b1
    if b1 is None:
        raise PreconditionUnmet("the arc B1 must be given")
    syms = detect_local_symmetries(K, tol)
    h = 2 * np.pi / K.n
    before = [s for s in syms if _mod_pi_close(s.t2, b1[0], 3 * h)]
    after = [s for s in syms if _mod_pi_close(s.t1, b1[1], 3 * h)]
    if not before or not after:
        raise PreconditionUnmet("B1 is not bounded by two local symmetries")
    scale_ = np.max(np.abs(K.boundary))
    if np.linalg.norm(before[0].center - after[0].center) > 1e-6 * scale_:
        raise PreconditionUnmet("the bounding symmetries have different centres")
    return K, flip_arcs(K, [b1])


# simplex probes -------------------------------------------------------------


@dataclass
class SimplexProbe:
    lam: float
    T: object  # Polygon (d = 2) or Simplex (d = 3)
    p: np.ndarray
    u: np.ndarray
    ts: list
    kind: str = "vertex"


def _simplex_vertices(T):
    return T.vertices if isinstance(T, (Polygon, Simplex)) else np.asarray(T)


def check_cone(T, p, u, kind="vertex"):
    """Raise ConeViolation unless -u is in the relative interior of the support cone."""
    v = _simplex_vertices(T)
    p = np.asarray(p, dtype=float)
    u = np.asarray(u, dtype=float)
    if kind == "vertex":
        k = int(np.argmin(np.linalg.norm(v - p, axis=1)))
        if np.linalg.norm(v[k] - p) > 1e-12:
            raise ConeViolation("p is not a vertex")
        gens = np.delete(v, k, axis=0) - p
        mu = np.linalg.solve(gens.T, -u)
        if np.any(mu <= 1e-12):
            raise ConeViolation("-u is not interior to the support cone")
    else:
        # edge midpoint in the plane: -u must point strictly inside
        c = v.mean(axis=0)
        e = None
        for i in range(len(v)):
            for j in range(i + 1, len(v)):
                if np.allclose(0.5 * (v[i] + v[j]), p):
                    e = v[j] - v[i]
        if e is None:
            raise ConeViolation("p is not an edge midpoint")
        nrm = rot90(e)
        if np.dot(nrm, c - p) < 0:
            nrm = -nrm
        if np.dot(-u, nrm) <= 1e-12:
            raise ConeViolation("-u is not interior to the support cone")


def probe_values(probe, n_mc=10**7, seed=0):
    """g_{(1-lam)T, -lam T}(p - t u) for every t; (values, stderr)."""
    T, lam = probe.T, probe.lam
    check_cone(T, probe.p, probe.u, probe.kind)
    vals, errs = [], []
    for i, t in enumerate(probe.ts):
        x = np.asarray(probe.p) - t * np.asarray(probe.u)
        if isinstance(T, Polygon):
            vals.append(cross_covariogram(scale(T, 1 - lam), scale(T, -lam), x))
            errs.append(0.0)
        else:
            v, e = covariogram_mc(T.scaled(1 - lam), x, n_mc, seed + i, H=T.scaled(-lam))
            vals.append(v)
            errs.append(e)
    return np.array(vals), np.array(errs)


@dataclass
class SimplexReport:
    kind: str
    dim: int
    lambdas: list
    ts: list
    values: np.ndarray  # (len(lambdas), len(ts))
    stderr: np.ndarray
    ratios: np.ndarray  # value(2t) / value(t) for consecutive doubled ts
    ratio_sigma: np.ndarray
    lambda_spread: float
    constants: np.ndarray  # value / (t^e * weight)

    def as_dict(self):
        return {
            "kind": self.kind,
            "dim": self.dim,
            "lambdas": list(self.lambdas),
            "ts": list(self.ts),
            "values": self.values.tolist(),
            "stderr": self.stderr.tolist(),
            "ratios": self.ratios.tolist(),
            "ratio_sigma": self.ratio_sigma.tolist(),
            "lambda_spread": self.lambda_spread,
            "constants": self.constants.tolist(),
        }


def default_triangle():
    return Polygon(np.array([[0.0, 0.0], [1.0, 0.2], [0.3, 0.9]]))


def default_tetrahedron():
    return Simplex(np.array([[0.0, 0, 0], [1.0, 0.1, 0.2], [0.2, 0.9, 0.1], [0.3, 0.2, 1.0]]))


def _inward(v, p):
    d = v.mean(axis=0) - p
    return -d / np.linalg.norm(d)


def simplex_scaling_check(kind="vertex", dim=2, lambdas=(0.3, 0.5, 0.7), ts=None, n_mc=10**7, seed=0):
    """Scaling of the simplex cross covariogram near a vertex or edge midpoint.

    Vertex probes should be lambda independent and scale as t^d; edge probes
    (d = 2) should scale as min(1 - lam, lam) * t.
    """
    T = default_triangle() if dim == 2 else default_tetrahedron()
    v = T.vertices
    if kind == "vertex":
        p = v[0]
    else:
        p = 0.5 * (v[0] + v[1])
    u = _inward(v, p)
    if ts is None:
        ts = [0.005, 0.01] if dim == 2 else [0.05, 0.1]
    vals, errs = [], []
    for i, lam in enumerate(lambdas):
        pr = SimplexProbe(lam, T, p, u, list(ts), kind)
        a, b = probe_values(pr, n_mc=n_mc, seed=seed + 1000 * i)
        vals.append(a)
        errs.append(b)
    vals, errs = np.array(vals), np.array(errs)
    ts_a = np.asarray(ts, dtype=float)
    ratios = vals[:, 1:] / vals[:, :-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.sqrt((errs[:, 1:] / vals[:, 1:]) ** 2 + (errs[:, :-1] / vals[:, :-1]) ** 2)
    sig = ratios * rel
    expo = dim if kind == "vertex" else dim - 1
    weight = np.ones(len(lambdas)) if kind == "vertex" else np.minimum(1 - np.array(lambdas), lambdas)
    consts = vals / (ts_a[None, :] ** expo * weight[:, None])
    spread = float(np.max(np.ptp(vals, axis=0)))
    return SimplexReport(kind, dim, list(lambdas), list(ts), vals, errs, ratios, sig, spread, consts)


def prism_mc_check(P, x, n=10**6, seed=0):
    """3-D Monte Carlo of P x [-1, 1] against the product formula."""
    B = Prism(P)
    est, err = covariogram_mc(B, x, n, seed)
    return est, err, prism_covariogram(P, x)
