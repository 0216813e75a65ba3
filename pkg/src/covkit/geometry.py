"""Planar convex polygons: hulls, support data, Minkowski sums, intersections
and distances.

Every polygon is stored as a counterclockwise ``(n, 2)`` float array in
strictly convex position.  A single absolute tolerance ``TOL`` governs
collinearity, face membership and point-in-polygon decisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import linprog

from . import _kernels
from .errors import DegenerateInput, InvalidPolygon, OriginOutside

TOL = 1e-9

# clip-by-halfplane is used while n*m stays below this; larger pairs go to
# the compiled half-plane kernel
CLIP_LIMIT = 4096
_CHUNK = 256


def direction(theta):
    """Unit vector u(theta) = (cos theta, sin theta)."""
    return np.array([math.cos(theta), math.sin(theta)])


def as_vector(u):
    """Accept an angle or a 2-vector; angles map to unit vectors."""
    if np.ndim(u) == 0:
        return direction(float(u))
    v = np.asarray(u, dtype=float)
    if v.shape != (2,):
        raise ValueError(f"expected an angle or a 2-vector, got shape {v.shape}")
    return v


def rot90(v):
    """Counterclockwise rotation by pi/2 (works on (..., 2) arrays)."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def rot_neg90(v):
    v = np.asarray(v, dtype=float)
    return np.stack([v[..., 1], -v[..., 0]], axis=-1)


def cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True, eq=False)
class Polygon:
    """Convex polygon with counterclockwise vertices in strictly convex position."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise InvalidPolygon(f"vertices must have shape (n, 2), got {v.shape}")
        if len(v) < 3:
            raise InvalidPolygon(f"need at least 3 vertices, got {len(v)}")
        if not np.all(np.isfinite(v)):
            raise InvalidPolygon("non-finite coordinate")
        if _signed_area(v) <= 0:
            raise InvalidPolygon("vertices are not counterclockwise")
        prev = np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0)
        chord = nxt - prev
        clen = np.hypot(chord[:, 0], chord[:, 1])
        # signed distance of each vertex to the chord joining its neighbours
        dist = cross2(chord, v - prev) / np.where(clen > 0, clen, 1.0)
        if np.any(clen <= TOL) or np.any(dist > -TOL):
            bad = int(np.argmax(dist))
            raise InvalidPolygon(f"vertex {bad} is not in strictly convex position")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"Polygon(n={len(self)}, area={self.area:.6g})"

    @cached_property
    def edges(self):
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @cached_property
    def area(self):
        return _signed_area(self.vertices)

    @cached_property
    def perimeter(self):
        e = self.edges
        return float(np.hypot(e[:, 0], e[:, 1]).sum())

    @cached_property
    def centroid(self):
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        c = cross2(v, w)
        return ((v + w) * c[:, None]).sum(axis=0) / (6.0 * self.area)

    @cached_property
    def _halfplanes(self):
        """Outward unit normals ``n`` and offsets ``c`` with P = {n.y <= c}."""
        e = self.edges
        n = rot_neg90(e)
        n /= np.hypot(n[:, 0], n[:, 1])[:, None]
        c = np.einsum("ij,ij->i", n, self.vertices)
        return n, c

    @cached_property
    def _lines(self):
        """Edge lines sorted by angle, for the compiled intersection kernel."""
        e = self.edges
        d = e / np.hypot(e[:, 0], e[:, 1])[:, None]
        ang = np.arctan2(d[:, 1], d[:, 0])
        ang = np.where(ang <= -math.pi, math.pi, ang)
        start = int(np.argmin(ang))
        order = np.roll(np.arange(len(ang)), -start)
        return self.vertices[order], d[order], ang[order]

    def contains(self, pts, tol=TOL):
        """Boolean mask of points inside (or within ``tol`` of) the polygon."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n, c = self._halfplanes
        out = np.empty(len(pts), dtype=bool)
        for i in range(0, len(pts), _CHUNK):
            out[i : i + _CHUNK] = np.all(pts[i : i + _CHUNK] @ n.T <= c + tol, axis=1)
        return out

    def boundary_distance(self, pts):
        """Signed distance to the boundary, positive inside."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n, c = self._halfplanes
        inside = np.empty(len(pts))
        for i in range(0, len(pts), _CHUNK):
            inside[i : i + _CHUNK] = np.min(c - pts[i : i + _CHUNK] @ n.T, axis=1)
        out = inside < 0
        if np.any(out):
            inside[out] = -_point_polygon_distance(pts[out], self)
        return inside

    def bounds(self):
        v = self.vertices
        return v.min(axis=0), v.max(axis=0)

    def diameter(self):
        v = self.vertices
        best = 0.0
        for i in range(0, len(v), 1024):
            d = v[i : i + 1024, None, :] - v[None, :, :]
            best = max(best, float(np.sqrt((d**2).sum(-1)).max()))
        return best


@dataclass(frozen=True)
class Segment:
    a: np.ndarray
    b: np.ndarray

    @property
    def length(self):
        return float(np.hypot(*(np.asarray(self.b) - np.asarray(self.a))))


def convex_hull(points, tol=TOL):
    """Minimal CCW convex polygon containing ``points`` (monotone chain)."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        raise DegenerateInput("fewer than 3 distinct points")

    def turn_ok(o, a, b):
        ob = b - o
        nrm = math.hypot(ob[0], ob[1])
        if nrm <= tol:
            return False
        return (ob[0] * (a[1] - o[1]) - ob[1] * (a[0] - o[0])) / nrm < -tol

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and not turn_ok(out[-2], out[-1], p):
                out.pop()
            if out and math.hypot(*(p - out[-1])) <= tol:
                continue
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("points are collinear")
    v = np.array(hull)
    if _signed_area(v) <= tol:
        raise DegenerateInput("hull has no interior")
    return Polygon(v)


def regular_polygon(m, radius=1.0, center=(0.0, 0.0), phase=0.0):
    t = phase + 2 * np.pi * np.arange(m) / m
    return Polygon(np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)]))


def support(P, u):
    """Support function h_P(u) = max over vertices of <v, u>."""
    return float(np.max(P.vertices @ as_vector(u)))


def support_many(P, dirs):
    """h_P for each row of ``dirs`` (shape (k, 2))."""
    dirs = np.asarray(dirs, dtype=float)
    out = np.empty(len(dirs))
    for i in range(0, len(dirs), 512):
        out[i : i + 512] = (dirs[i : i + 512] @ P.vertices.T).max(axis=1)
    return out


def width(P, u):
    u = as_vector(u)
    return support(P, u) + support(P, -u)


def face(P, u, tol=TOL):
    """Face F_P(u) as a (possibly degenerate) segment."""
    u = as_vector(u)
    proj = P.vertices @ u
    on = P.vertices[proj >= proj.max() - tol * np.linalg.norm(u)]
    t = on @ rot90(u)
    return Segment(on[np.argmin(t)].copy(), on[np.argmax(t)].copy())


def translate(P, v):
    return Polygon(P.vertices + np.asarray(v, dtype=float))


def reflect(P):
    return Polygon(-P.vertices)


def scale(P, s):
    """Homothety about o; negative factors also reflect."""
    if s == 0:
        raise DegenerateInput("zero scale factor")
    return Polygon(P.vertices * float(s))


def minkowski_sum(P, Q):
    """P + Q by merging the angle-sorted edge sequences."""

    def from_lowest(V):
        i = int(np.lexsort((V[:, 0], V[:, 1]))[0])
        V = np.roll(V, -i, axis=0)
        e = np.roll(V, -1, axis=0) - V
        ang = np.mod(np.arctan2(e[:, 1], e[:, 0]), 2 * np.pi)
        ang[0] = ang[0] if ang[0] < np.pi else 0.0
        return V[0], e, ang

    p0, ep, ap = from_lowest(P.vertices)
    q0, eq, aq = from_lowest(Q.vertices)
    edges = np.concatenate([ep, eq])
    order = np.argsort(np.concatenate([ap, aq]), kind="stable")
    pts = p0 + q0 + np.vstack([np.zeros(2), np.cumsum(edges[order], axis=0)[:-1]])
    return _canonical(pts)


def _canonical(pts, tol=TOL):
    """Drop duplicate and collinear vertices of an already convex CCW chain."""
    v = np.asarray(pts, dtype=float)
    while len(v) >= 3:
        prev = np.roll(v, 1, axis=0)
        nxt = np.roll(v, -1, axis=0)
        chord = nxt - prev
        clen = np.hypot(chord[:, 0], chord[:, 1])
        dup = np.hypot(*(v - prev).T) <= tol
        flat = cross2(chord, v - prev) / np.where(clen > 0, clen, 1.0) > -tol
        bad = dup | flat | (clen <= tol)
        if not bad.any():
            break
        # remove at most every other flagged vertex so neighbours stay valid
        idx = np.flatnonzero(bad)
        drop = idx[np.concatenate([[True], np.diff(idx) > 1])]
        if len(drop) > 1 and drop[0] == 0 and drop[-1] == len(v) - 1:
            drop = drop[:-1]
        v = np.delete(v, drop, axis=0)
    if len(v) < 3 or _signed_area(v) <= 0:
        raise DegenerateInput("polygon collapsed")
    return Polygon(v)


def difference_body(P):
    return minkowski_sum(P, reflect(P))


def _clip(subject, Q):
    """Sutherland-Hodgman clip of a CCW vertex list by every edge of Q."""
    out = [tuple(p) for p in subject]
    n, c = Q._halfplanes
    for k in range(len(c)):
        if not out:
            break
        nx, ny, ck = n[k, 0], n[k, 1], c[k]
        inp = out
        out = []
        m = len(inp)
        for i in range(m):
            ax, ay = inp[i - 1]
            bx, by = inp[i]
            da = nx * ax + ny * ay - ck
            db = nx * bx + ny * by - ck
            if db <= 0:
                if da > 0:
                    t = da / (da - db)
                    out.append((ax + t * (bx - ax), ay + t * (by - ay)))
                out.append((bx, by))
            elif da <= 0:
                t = da / (da - db)
                out.append((ax + t * (bx - ax), ay + t * (by - ay)))
    return np.array(out, dtype=float).reshape(-1, 2)


def _kernel_intersection(P, Q, shift=None):
    """Vertices of P ∩ (Q + shift) with line provenance (0 = P, 1 = Q)."""
    pv, pd, pa = P._lines
    qv, qd, qa = Q._lines
    if shift is not None:
        qv = qv + shift
    pts = np.concatenate([pv, qv])
    dirs = np.concatenate([pd, qd])
    order = np.argsort(np.concatenate([pa, qa]), kind="stable")
    src = np.concatenate([np.zeros(len(pv), np.int64), np.ones(len(qv), np.int64)])
    pts = pts[order]
    dirs = dirs[order]
    return _kernels.halfplane_intersection(
        np.ascontiguousarray(pts[:, 0]),
        np.ascontiguousarray(pts[:, 1]),
        np.ascontiguousarray(dirs[:, 0]),
        np.ascontiguousarray(dirs[:, 1]),
        src[order],
    )


def intersection_area(P, Q, shift=None):
    """V(P ∩ (Q + shift)) without building a Polygon."""
    if len(P) * len(Q) <= CLIP_LIMIT:
        sub = P.vertices if shift is None else P.vertices - shift
        pts = _clip(sub, Q)
        if len(pts) < 3:
            return 0.0
        return max(_signed_area(pts), 0.0)
    xs, ys, _, _ = _kernel_intersection(P, Q, shift)
    if len(xs) < 3:
        return 0.0
    return max(float(_kernels.shoelace(xs, ys)), 0.0)


def intersect_convex(P, Q):
    """P ∩ Q as a Polygon, or None when the intersection has no interior."""
    if len(P) * len(Q) <= CLIP_LIMIT:
        pts = _clip(P.vertices, Q)
    else:
        xs, ys, _, _ = _kernel_intersection(P, Q)
        pts = np.column_stack([xs, ys])
    if len(pts) < 3 or _signed_area(pts) <= TOL * TOL:
        return None
    try:
        return _canonical(pts)
    except (DegenerateInput, InvalidPolygon):
        return None


def area(P):
    return P.area


def perimeter(P):
    return P.perimeter


def radial(P, u):
    """Radius function r_P(u) = max{a > 0 : a u in P}; needs o in int P."""
    n, c = P._halfplanes
    if np.any(c <= TOL):
        raise OriginOutside("origin is not interior to the polygon")
    u = as_vector(u)
    u = u / np.linalg.norm(u)
    nu = n @ u
    pos = nu > 0
    return float(np.min(c[pos] / nu[pos]))


def radial_samples(P, m):
    t = 2 * np.pi * np.arange(m) / m
    return np.array([radial(P, s) for s in t])


def area_from_radial(r):
    """(1/2) * periodic trapezoid integral of r(theta)^2 on a uniform grid."""
    r = np.asarray(r, dtype=float)
    return 0.5 * float(np.sum(r * r)) * (2 * np.pi / len(r))


def _point_polygon_distance(pts, P):
    """Euclidean distance from each point to the region P (0 inside)."""
    pts = np.atleast_2d(pts)
    idx = np.flatnonzero(~P.contains(pts, tol=0.0))
    out = np.zeros(len(pts))
    a = P.vertices
    e = P.edges
    ee = np.einsum("ij,ij->i", e, e)
    for i in range(0, len(idx), _CHUNK):
        sel = idx[i : i + _CHUNK]
        d = pts[sel][:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("kij,ij->ki", d, e) / ee, 0.0, 1.0)
        r = d - t[..., None] * e
        out[sel] = np.sqrt((r**2).sum(-1)).min(axis=1)
    return out


def hausdorff(P, Q):
    """Hausdorff distance between the convex regions P and Q."""
    return float(
        max(_point_polygon_distance(P.vertices, Q).max(), _point_polygon_distance(Q.vertices, P).max())
    )


def nikodym(P, Q):
    """Area of the symmetric difference, at the given (raw) positions."""
    return max(P.area + Q.area - 2.0 * intersection_area(P, Q), 0.0)


def _best_translation(P, Q, dirs):
    """Translation v minimising max_i |h_P(u_i) - h_Q(u_i) - <v, u_i>|."""
    diff = support_many(P, dirs) - support_many(Q, dirs)
    k = len(dirs)
    # variables (vx, vy, t); minimise t
    a_ub = np.vstack(
        [np.column_stack([-dirs, -np.ones(k)]), np.column_stack([dirs, -np.ones(k)])]
    )
    b_ub = np.concatenate([-diff, diff])
    res = linprog([0, 0, 1], A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * 3, method="highs")
    if not res.success:
        return P.centroid - Q.centroid
    return res.x[:2]


def congruence_distance(P, Q, n_dirs=1024):
    """Upper bound on min over translations/reflections phi of hausdorff(P, phi(Q)).

    For each orientation the translation is chosen by a Chebyshev fit of
    support functions on ``n_dirs`` directions; the exact Hausdorff distance
    at that translation is returned, so the value never underestimates.
    """
    t = 2 * np.pi * np.arange(n_dirs) / n_dirs
    dirs = np.column_stack([np.cos(t), np.sin(t)])
    best = hausdorff(P, Q)
    for cand in (Q, reflect(Q)):
        v = _best_translation(P, cand, dirs)
        best = min(best, hausdorff(P, translate(cand, v)))
    return best
