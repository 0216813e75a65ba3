"""Local symmetries of smooth bodies, arc flips and pair verdicts.

Antipodal arcs z(t1..t2) and z(t1+pi..t2+pi) are point reflections of each
other exactly when tau(t) = tau(t + pi) on [t1, t2], so detection works on
the sampled curvature profile.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .covariogram import covariogram_many, gradient_from_dk
from .errors import DKMismatch, OverlappingArcs
from .geometry import congruence_distance, difference_body, hausdorff
from .smooth import SmoothBody, body_from_curvature, difference_body_smooth

MERGE_GAP = 3
MIN_RUN = 3


def default_tol(A):
    return 1e-6 * float(np.max(A.R))


def curvature_gap(A, t):
    """|tau(t) - tau(t + pi)| from the interpolated profile."""
    t = np.asarray(t, dtype=float)
    return np.abs(A.tau(t) - A.tau(t + np.pi))


def sample_gap(A):
    """Curvature gap at the sample angles, exact (no interpolation)."""
    tau = 1.0 / A.R
    return np.abs(tau - np.roll(tau, -(A.n // 2)))


@dataclass
class LocalSymmetry:
    t1: float
    t2: float
    midpoint: np.ndarray
    center: np.ndarray
    arc_on_dk: tuple

    def as_dict(self):
        return {
            "t1": self.t1,
            "t2": self.t2,
            "midpoint": self.midpoint.tolist(),
            "center": self.center.tolist(),
            "arc_on_dk": list(self.arc_on_dk),
        }


@dataclass
class SymmetryReport:
    symmetries: list
    centrally_symmetric: bool = False

    def __len__(self):
        return len(self.symmetries)

    def __iter__(self):
        return iter(self.symmetries)

    def __getitem__(self, i):
        return self.symmetries[i]


def _runs(mask):
    """Maximal cyclic runs of True as (start, length) pairs."""
    n = len(mask)
    if mask.all():
        return [(0, n)]
    if not mask.any():
        return []
    # rotate so index 0 is False
    shift = int(np.flatnonzero(~mask)[0])
    m = np.roll(mask, -shift).astype(np.int8)
    d = np.diff(np.concatenate([[0], m, [0]]))
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    return [((s + shift) % n, e - s) for s, e in zip(starts, ends)]


def _merge_short_gaps(mask, gap):
    """Fill cyclic False-runs shorter than ``gap`` samples."""
    out = mask.copy()
    for s, ln in _runs(~mask):
        if ln < gap and ln < len(mask):
            out[(s + np.arange(ln)) % len(mask)] = True
    return out


def _symmetry(A, t1, t2):
    zd = A.z_diff(np.array([t1, t2]))
    ts = np.linspace(t1, t2, 33)
    center = 0.5 * (A.z(ts) + A.z(ts + np.pi)).mean(axis=0)
    return LocalSymmetry(float(t1), float(t2), 0.5 * (zd[0] + zd[1]), center, (float(t1), float(t2)))


def detect_local_symmetries(A, tol=None):
    """Maximal antipodal arc pairs on which the curvature gap is <= tol.

    Runs closer than three samples are merged and runs of fewer than three
    samples are dropped.  A body symmetric everywhere is flagged as
    centrally symmetric instead of being split into arcs.
    """
    tol = default_tol(A) if tol is None else tol
    n = A.n
    h = 2 * np.pi / n
    mask = _merge_short_gaps(sample_gap(A) <= tol, MERGE_GAP)
    if mask.all():
        return SymmetryReport([], centrally_symmetric=True)
    found = []
    for s, ln in _runs(mask):
        if ln < MIN_RUN or s >= n // 2:
            continue
        t1 = s * h
        t2 = (s + ln - 1) * h
        found.append(_symmetry(A, t1, t2))
    found.sort(key=lambda r: r.t1)
    return SymmetryReport(found)


def t_star(A, t1, tol=None):
    """Largest t in [t1, t1 + pi) with gap <= tol on all of [t1, t]."""
    tol = default_tol(A) if tol is None else tol
    if curvature_gap(A, t1) > tol:
        return float(t1)
    h = 2 * np.pi / A.n
    ts = t1 + h * np.arange(1, A.n // 2)
    bad = np.flatnonzero(curvature_gap(A, ts) > tol)
    if len(bad) == 0:
        return float(ts[-1])
    return float(t1 if bad[0] == 0 else ts[bad[0] - 1])


def x0_set(A, tol=None):
    """The set {±x_n} of midpoints attached to the local symmetries."""
    rep = detect_local_symmetries(A, tol)
    out = []
    for s in rep:
        out.append(s.midpoint)
        out.append(-s.midpoint)
    return out


def _arc_mask(n, arcs):
    t = 2 * np.pi * np.arange(n) / n
    mask = np.zeros(n, dtype=bool)
    for a, b in arcs:
        mask |= np.mod(t - a, 2 * np.pi) <= np.mod(b - a, 2 * np.pi)
    return mask


def flip_arcs(A, arcs):
    """Swap R(theta) and R(theta + pi) on ``arcs`` and their antipodes.

    The difference body is unchanged.  Closure is re-projected; the removed
    first harmonic is kept in ``projection`` of the result.
    """
    n = A.n
    m = _arc_mask(n, arcs)
    anti = np.roll(m, n // 2)
    if np.any(m & anti):
        raise OverlappingArcs("arcs meet their antipodes")
    sel = m | anti
    R = np.where(sel, np.roll(A.R, -(n // 2)), A.R)
    return body_from_curvature(R, base=A.base)


@dataclass
class PairVerdict:
    dk_equal: bool
    dk_residual: float
    gc_bd: bool
    gc_bd_residual: float
    gc_origin: bool
    gc_origin_residual: float
    lc: bool
    congruent: bool
    delta_bar: float
    area_k: float
    area_h: float
    band: float
    gc_bd_nodes: int = 0
    gc_origin_nodes: int = 0

    def as_dict(self):
        return {k: (bool(v) if isinstance(v, np.bool_) else v) for k, v in asdict(self).items()}


def _as_polygon(B):
    return B.polygon() if isinstance(B, SmoothBody) else B


def _difference_polygon(B):
    if isinstance(B, SmoothBody) and B.n % 2 == 0:
        return difference_body_smooth(B).polygon()
    return difference_body(_as_polygon(B))


def boundary_band_nodes(DK, depth, n=101):
    """Grid nodes inside DK within ``depth`` of its boundary."""
    lo, hi = DK.bounds()
    xs = np.linspace(lo[0], hi[0], n)
    ys = np.linspace(lo[1], hi[1], n)
    X, Y = np.meshgrid(xs, ys)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    d = DK.boundary_distance(pts)
    return pts[(d > 0) & (d <= depth)]


def disk_nodes(center, radius, n=21):
    s = np.linspace(-radius, radius, n)
    X, Y = np.meshgrid(s, s)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    return np.asarray(center, dtype=float) + pts[np.hypot(pts[:, 0], pts[:, 1]) <= radius]


def gc_residual(K, H, pts):
    """max |g_K - g_H| over the given nodes."""
    if len(pts) == 0:
        return 0.0
    return float(np.max(np.abs(covariogram_many(K, pts) - covariogram_many(H, pts))))


def lc_smooth(K, H, tol=None):
    """Local coincidence from the curvature profiles.

    Every sample needs a three-sample neighbourhood on which either
    R_H = R_K (translation) or R_H = R_K(. + pi) (reflection).
    """
    if K.n != H.n:
        return False
    tol = 1e-9 * float(np.max(K.R)) if tol is None else tol
    a = np.abs(H.R - K.R) <= tol
    b = np.abs(H.R - np.roll(K.R, -(K.n // 2))) <= tol

    def nb(m):
        return m & np.roll(m, 1) & np.roll(m, -1)

    return bool(np.all(nb(a) | nb(b)))


def _edge_dirs(P):
    e = P.edges
    return e / np.hypot(e[:, 0], e[:, 1])[:, None]


def lc_polygon(K, H, tol=1e-9):
    """Local coincidence for polygons.

    Each vertex cone (incoming, outgoing edge direction) of one polygon must
    appear in the other up to translation or point reflection, and likewise
    for edge directions.
    """

    def cones(P):
        d = _edge_dirs(P)
        return np.column_stack([np.roll(d, 1, axis=0), d])

    def covered(A, B):
        ca, cb = cones(A), cones(B)
        # point reflection negates both edge directions of a vertex cone
        cr = -cb
        for c in ca:
            if not (
                np.any(np.all(np.abs(cb - c) <= tol, axis=1))
                or np.any(np.all(np.abs(cr - c) <= tol, axis=1))
            ):
                return False
        da, db = _edge_dirs(A), _edge_dirs(B)
        for d in da:
            if not np.any(np.all(np.abs(db - d) <= tol, axis=1) | np.all(np.abs(db + d) <= tol, axis=1)):
                return False
        return True

    return covered(K, H) and covered(H, K)


def check_pair(
    K,
    H,
    band=0.05,
    gc_tol=1e-3,
    dk_tol=1e-6,
    congruence_tol=1e-2,
    grid_n=101,
    origin_n=21,
):
    """Verdict bundle for a pair of bodies.

    ``band`` is a fraction of diam K; it sets both the depth of the strip
    inside bd DK and the radius of the disk around o that are sampled.
    """
    PK, PH = _as_polygon(K), _as_polygon(H)
    DK, DH = _difference_polygon(K), _difference_polygon(H)
    dk_res = hausdorff(DK, DH)
    depth = band * PK.diameter()
    bd_nodes = boundary_band_nodes(DK, depth, grid_n)
    bd_nodes = bd_nodes[DH.contains(bd_nodes, tol=0.0)]
    o_nodes = disk_nodes((0.0, 0.0), depth, origin_n)
    r_bd = gc_residual(PK, PH, bd_nodes)
    r_o = gc_residual(PK, PH, o_nodes)
    if isinstance(K, SmoothBody) and isinstance(H, SmoothBody):
        lc = lc_smooth(K, H)
    else:
        lc = lc_polygon(PK, PH)
    db = congruence_distance(PK, PH)
    return PairVerdict(
        dk_equal=dk_res <= dk_tol,
        dk_residual=dk_res,
        gc_bd=r_bd <= gc_tol,
        gc_bd_residual=r_bd,
        gc_origin=r_o <= gc_tol,
        gc_origin_residual=r_o,
        lc=lc,
        congruent=db <= congruence_tol,
        delta_bar=db,
        area_k=PK.area,
        area_h=PH.area,
        band=band,
        gc_bd_nodes=len(bd_nodes),
        gc_origin_nodes=len(o_nodes),
    )


def midpoint_gradient_check(K, H, t0, ts, dk_tol=1e-6):
    """max_t |grad g_K(x_t) - grad g_H(x_t)| with x_t = (z_DK(t0) + z_DK(t)) / 2."""
    PK, PH = _as_polygon(K), _as_polygon(H)
    res = hausdorff(_difference_polygon(K), _difference_polygon(H))
    if res > dk_tol:
        raise DKMismatch(f"difference bodies differ by {res:.3g}")
    z0 = K.z_diff(t0)
    worst = 0.0
    for t in np.atleast_1d(ts):
        x = 0.5 * (z0 + K.z_diff(t))
        worst = max(worst, float(np.linalg.norm(gradient_from_dk(PK, x) - gradient_from_dk(PH, x))))
    return worst


def symmetries_match(ka, kb):
    """Largest mismatch between two symmetry lists (inf if counts differ).

    Compares arc endpoints and midpoints x_n; both are translation
    invariant.
    """
    if len(ka) != len(kb):
        return float("inf")
    worst = 0.0
    for a, b in zip(ka, kb):
        worst = max(
            worst,
            abs(a.t1 - b.t1),
            abs(a.t2 - b.t2),
            float(np.linalg.norm(a.midpoint - b.midpoint)),
        )
    return worst
