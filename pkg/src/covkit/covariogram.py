"""Covariograms, cross covariograms, the chord map D_K and sampling oracles.

Sign convention: ``D_K(x)`` is the chord ``p - q`` oriented so that
``D_K(x) = R_{pi/2} grad g_K(x)``, i.e. ``cross(D_K(x), x) > 0``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import AtOrigin, OutsideSupport, StepTooSmall
from .geometry import (
    TOL,
    Polygon,
    _kernel_intersection,
    as_vector,
    convex_hull,
    cross2,
    difference_body,
    intersection_area,
    rot_neg90,
)
from .smooth import SmoothBody

MAX_NODES = 10**7


def _poly(K):
    return K.polygon() if isinstance(K, SmoothBody) else K


def covariogram(K, x):
    """g_K(x) = V(K ∩ (K + x))."""
    K = _poly(K)
    return intersection_area(K, K, np.asarray(x, dtype=float))


def cross_covariogram(K, H, x):
    """g_{K,H}(x) = V(K ∩ (H + x)); supported on K + (-H)."""
    return intersection_area(_poly(K), _poly(H), np.asarray(x, dtype=float))


def covariogram_many(K, pts, H=None):
    K = _poly(K)
    H = K if H is None else _poly(H)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    return np.array([intersection_area(K, H, p) for p in pts])


@dataclass
class CovariogramField:
    body_id: str
    grid_origin: np.ndarray
    step: float
    nx: int
    ny: int
    values: np.ndarray  # shape (ny, nx), row j has y = origin_y + j*step
    support: Polygon = field(repr=False)

    def axes(self):
        xs = self.grid_origin[0] + self.step * np.arange(self.nx)
        ys = self.grid_origin[1] + self.step * np.arange(self.ny)
        return xs, ys

    def nodes(self):
        xs, ys = self.axes()
        X, Y = np.meshgrid(xs, ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    def symmetry_defect(self):
        """max |g(x) - g(-x)| over mirrored nodes (grid must be symmetric)."""
        return float(np.max(np.abs(self.values - self.values[::-1, ::-1])))

    def to_csv(self, path):
        pts = self.nodes()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "g"])
            for (x, y), g in zip(pts, self.values.ravel()):
                w.writerow([f"{x:.17g}", f"{y:.17g}", f"{g:.17g}"])


def grid_axes(lo, hi, step):
    """Nodes centre + k*step covering [lo, hi]; symmetric about the centre."""
    c = 0.5 * (lo + hi)
    half = np.floor((hi - lo) / 2 / step + 1e-9).astype(int)
    return c, half


def covariogram_grid(K, step, region="support", body_id="K"):
    """g_K sampled on a grid over the bounding box of ``region``.

    The grid is symmetric about the box centre, so for ``region="support"``
    it contains o and is mirror symmetric.  Nodes outside DK get 0.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    P = _poly(K)
    DK = difference_body(P)
    reg = DK if isinstance(region, str) else _poly(region)
    lo, hi = reg.bounds()
    c, half = grid_axes(lo, hi, step)
    nx, ny = 2 * int(half[0]) + 1, 2 * int(half[1]) + 1
    if nx * ny > MAX_NODES:
        raise StepTooSmall(f"{nx}x{ny} grid exceeds {MAX_NODES} nodes")
    origin = c - half * step
    fld = CovariogramField(body_id, origin, float(step), nx, ny, np.zeros((ny, nx)), DK)
    pts = fld.nodes()
    inside = DK.contains(pts, tol=0.0)
    if not isinstance(region, str):
        inside &= reg.contains(pts, tol=TOL)
    vals = np.zeros(len(pts))
    vals[inside] = covariogram_many(P, pts[inside])
    fld.values = vals.reshape(ny, nx)
    return fld


@dataclass
class DKResult:
    x: np.ndarray
    dk: np.ndarray
    parallelogram: Polygon
    p: np.ndarray
    q: np.ndarray

    @property
    def parallelogram_area(self):
        return abs(float(cross2(self.q - self.p, self.x)))


def chord_endpoints(K, x):
    """Points where bd K and bd(K + x) cross, and the intersection area."""
    P = _poly(K)
    x = np.asarray(x, dtype=float)
    xs, ys, sa, sb = _kernel_intersection(P, P, x)
    if len(xs) < 3:
        raise OutsideSupport(f"x = {x.tolist()} is not interior to DK")
    a = float(_kernels.shoelace(xs, ys))
    mixed = sa != sb
    pts = np.column_stack([xs[mixed], ys[mixed]])
    if a <= TOL * TOL or len(pts) < 2:
        raise OutsideSupport(f"x = {x.tolist()} is not interior to DK")
    if len(pts) > 2:
        d = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1)
        i, j = np.unravel_index(np.argmax(d), d.shape)
        pts = pts[[i, j]]
    return pts[0], pts[1], a


def dk_map(K, x):
    """Chord map D_K(x) with its parallelogram P_K(x)."""
    x = np.asarray(x, dtype=float)
    if np.hypot(*x) <= TOL:
        raise AtOrigin("D_K is undefined at the origin")
    p, q, _ = chord_endpoints(K, x)
    d = p - q
    if cross2(d, x) < 0:
        p, q, d = q, p, -d
    try:
        par = convex_hull(np.array([p, q, p - x, q - x]))
    except Exception:
        par = None
    return DKResult(x, d, par, p, q)


def lunette_identity_residual(K, x):
    """|g(D(x)) - g(o) + V(P(x)) + g(x)|."""
    P = _poly(K)
    r = dk_map(P, x)
    return abs(covariogram(P, r.dk) - P.area + r.parallelogram_area + covariogram(P, x))


def gradient_fd(K, x, h=1e-5):
    """Central-difference gradient of g_K."""
    P = _poly(K)
    x = np.asarray(x, dtype=float)
    e = np.eye(2) * h
    return np.array(
        [(covariogram(P, x + e[i]) - covariogram(P, x - e[i])) / (2 * h) for i in range(2)]
    )


def gradient_from_dk(K, x):
    """grad g_K(x) = R_{-pi/2} D_K(x)."""
    return rot_neg90(dk_map(K, x).dk)


def derivative_at_zero(K, u, h=1e-4):
    """One-sided difference quotient (g(hu) - g(o)) / h."""
    P = _poly(K)
    u = as_vector(u)
    u = u / np.linalg.norm(u)
    return (covariogram(P, h * u) - P.area) / h


def interval_covariogram(length=2.0):
    """Covariogram of a segment of the given length: t -> (length - |t|)_+."""

    def g(t):
        return np.prod(np.maximum(length - np.abs(np.atleast_1d(t)), 0.0))

    return g


def product_covariogram(g1, g2, x, split=1):
    """g_{K1 x K2}(x) = g1(x[:split]) * g2(x[split:])."""
    x = np.asarray(x, dtype=float)
    a, b = x[:split], x[split:]
    a = a[0] if len(a) == 1 else a
    b = b[0] if len(b) == 1 else b
    return float(g1(a) * g2(b))


def prism_covariogram(P, x, half_height=1.0):
    """Covariogram of P x [-h, h]^(d-2) at a point x of dimension d."""
    x = np.asarray(x, dtype=float)
    return product_covariogram(
        lambda a: covariogram(P, a), interval_covariogram(2 * half_height), x, split=2
    )


# sampling oracle -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Prism:
    """base x [-half_height, half_height]^(dim - 2)."""

    base: Polygon
    half_height: float = 1.0
    dim: int = 3

    def bounds(self):
        lo, hi = self.base.bounds()
        k = self.dim - 2
        return (
            np.concatenate([lo, np.full(k, -self.half_height)]),
            np.concatenate([hi, np.full(k, self.half_height)]),
        )

    def contains(self, pts):
        return self.base.contains(pts[:, :2], tol=0.0) & np.all(
            np.abs(pts[:, 2:]) <= self.half_height, axis=1
        )

    @property
    def volume(self):
        return self.base.area * (2 * self.half_height) ** (self.dim - 2)


@dataclass(frozen=True, eq=False)
class Simplex:
    """Simplex given by its d + 1 vertices in R^d."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.shape[0] != v.shape[1] + 1:
            raise ValueError("a d-simplex needs d + 1 vertices")
        object.__setattr__(self, "vertices", v)
        m = (v[1:] - v[0]).T
        if abs(np.linalg.det(m)) < TOL:
            raise ValueError("degenerate simplex")
        object.__setattr__(self, "_inv", np.linalg.inv(m))

    @property
    def dim(self):
        return self.vertices.shape[1]

    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, pts):
        lam = (pts - self.vertices[0]) @ self._inv.T
        return np.all(lam >= 0, axis=1) & (lam.sum(axis=1) <= 1)

    def translated(self, v):
        return Simplex(self.vertices + np.asarray(v, dtype=float))

    def scaled(self, s):
        return Simplex(self.vertices * s)

    def reflected(self):
        return Simplex(-self.vertices)

    @property
    def volume(self):
        from math import factorial

        return abs(np.linalg.det(self.vertices[1:] - self.vertices[0])) / factorial(self.dim)


class _Shifted:
    def __init__(self, body, x):
        self.body, self.x = body, np.asarray(x, dtype=float)

    def bounds(self):
        lo, hi = _bounds(self.body)
        return lo + self.x, hi + self.x

    def contains(self, pts):
        return _contains(self.body, pts - self.x)


def _bounds(B):
    return B.bounds()


def _contains(B, pts):
    if isinstance(B, Polygon):
        return B.contains(pts, tol=0.0)
    return B.contains(pts)


def covariogram_mc(K, x, n, seed, H=None, chunk=1_000_000):
    """Hit-or-miss estimate of V(K ∩ (H + x)) with its standard error.

    Points are drawn uniformly in the intersection of the two bounding boxes
    from a Philox stream keyed by ``seed``.
    """
    if n < 1000:
        raise ValueError("need at least 1000 samples")
    H = K if H is None else H
    K, H = _poly(K), _poly(H)
    Hx = _Shifted(H, x)
    lo1, hi1 = _bounds(K)
    lo2, hi2 = Hx.bounds()
    lo, hi = np.maximum(lo1, lo2), np.minimum(hi1, hi2)
    if np.any(hi <= lo):
        return 0.0, 0.0
    vol = float(np.prod(hi - lo))
    rng = np.random.Generator(np.random.Philox(seed))
    hits = 0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        pts = lo + (hi - lo) * rng.random((m, len(lo)))
        hits += int(np.count_nonzero(_contains(K, pts) & Hx.contains(pts)))
        done += m
    p = hits / n
    return vol * p, vol * np.sqrt(p * (1 - p) / n)

