"""Chords of a polygon parallel to a direction.

With ``u`` the chord direction and ``v = R_{pi/2} u`` the transverse
direction, the chord-length profile ``L(s)`` (length of the chord at
transverse offset ``s``) is concave and piecewise linear with breakpoints at
the vertex offsets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .covariogram import covariogram
from .errors import DegenerateInput, InvalidPolygon, ZeroVector
from .geometry import TOL, _canonical, as_vector, rot90

BISECT_TOL = 1e-12


def _unit(u):
    u = as_vector(u)
    r = np.hypot(*u)
    if r <= TOL:
        raise ZeroVector("direction has zero length")
    return u / r


def chord_length(K, y, u):
    """Length of K ∩ {y + s u}; 0 if the line misses K."""
    u = _unit(u)
    y = np.asarray(y, dtype=float)
    n, c = K._halfplanes
    nu = n @ u
    rhs = c - n @ y
    lo, hi = -np.inf, np.inf
    pos, neg = nu > 1e-15, nu < -1e-15
    if np.any(rhs[~(pos | neg)] < 0):
        return 0.0
    if np.any(pos):
        hi = np.min(rhs[pos] / nu[pos])
    if np.any(neg):
        lo = np.max(rhs[neg] / nu[neg])
    return float(max(hi - lo, 0.0))


def chord_profile(K, u):
    """Breakpoints (s, L(s)) of the transverse chord-length profile."""
    u = _unit(u)
    v = rot90(u)
    s = np.unique(K.vertices @ v)
    L = np.array([chord_length(K, si * v, u) for si in s])
    return s, L


def _bisect(f, a, b, tol=BISECT_TOL):
    """Root of the monotone sign change of f on [a, b]."""
    fa = f(a)
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm >= 0) == (fa >= 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def superlevel_interval(K, u, length):
    """Transverse interval [s_lo, s_hi] where the chord length is >= length."""
    u = _unit(u)
    v = rot90(u)
    s, L = chord_profile(K, u)
    k = int(np.argmax(L))
    if L[k] < length:
        return None

    def f(t):
        return chord_length(K, t * v, u) - length

    lo = s[0] if L[0] >= length else _bisect(f, s[0], s[k])
    hi = s[-1] if L[-1] >= length else _bisect(f, s[k], s[-1])
    return lo, hi


def _clip_halfplane(pts, n, c):
    out = []
    m = len(pts)
    for i in range(m):
        a, b = pts[i - 1], pts[i]
        da, db = n @ a - c, n @ b - c
        if db <= 0:
            if da > 0:
                out.append(a + da / (da - db) * (b - a))
            out.append(b)
        elif da <= 0:
            out.append(a + da / (da - db) * (b - a))
    return np.array(out).reshape(-1, 2)


def strip(K, v, lo, hi):
    """K ∩ {lo <= <y, v> <= hi} as a Polygon, or None."""
    pts = _clip_halfplane(K.vertices, v, hi)
    if len(pts) >= 3:
        pts = _clip_halfplane(pts, -v, -lo)
    if len(pts) < 3:
        return None
    try:
        return _canonical(pts)
    except (DegenerateInput, InvalidPolygon):
        return None


@dataclass
class ChordSet:
    direction: np.ndarray
    threshold: float
    kx: object  # Polygon or None when empty
    kbar_length: float
    interval: tuple = None

    @property
    def empty(self):
        return self.kx is None


def chord_set(K, x):
    """K(x): the union of chords parallel to x of length >= |x|."""
    x = np.asarray(x, dtype=float)
    t = float(np.hypot(*x))
    if t <= TOL:
        raise ZeroVector("x must be non-zero")
    u = x / t
    iv = superlevel_interval(K, u, t)
    if iv is None:
        return ChordSet(u, t, None, 0.0)
    lo, hi = iv
    kx = strip(K, rot90(u), lo, hi)
    return ChordSet(u, t, kx, float(hi - lo) if kx is not None else 0.0, (lo, hi))


def kbar_length(K, x):
    return chord_set(K, x).kbar_length


def derivative_identity_residual(K, u, t, h=1e-6):
    """|d/dt g_K(t u) + V_1(K̄(t u))| with a central difference."""
    u = _unit(u)
    d = (covariogram(K, (t + h) * u) - covariogram(K, (t - h) * u)) / (2 * h)
    return abs(d + kbar_length(K, t * u))


@dataclass
class ChordHistogram:
    edges: np.ndarray
    mass: np.ndarray  # fractions of the transverse measure, sums to 1
    total: float  # transverse extent of K

    def survival(self, length):
        """Fraction of transverse measure with chord length >= length."""
        lo, hi = self.edges[:-1], self.edges[1:]
        w = np.clip((hi - length) / np.where(hi > lo, hi - lo, 1.0), 0.0, 1.0)
        return float(np.sum(self.mass * w))


def chord_length_distribution(K, u, bins):
    """Transverse-measure distribution of chord lengths parallel to u.

    Each linear piece of the chord profile spreads its transverse measure
    uniformly over the lengths it covers; the masses are fractions of the
    total transverse extent.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    s, L = chord_profile(K, u)
    total = float(s[-1] - s[0])
    top = float(L.max())
    edges = np.linspace(0.0, top, bins + 1)
    mass = np.zeros(bins)
    for i in range(len(s) - 1):
        w = s[i + 1] - s[i]
        a, b = sorted((L[i], L[i + 1]))
        if b - a <= TOL * max(top, 1.0):
            k = min(int(np.searchsorted(edges, a, side="right")) - 1, bins - 1)
            mass[max(k, 0)] += w
            continue
        over = np.clip(np.minimum(edges[1:], b) - np.maximum(edges[:-1], a), 0.0, None)
        mass += w * over / (b - a)
    return ChordHistogram(edges, mass / total, total)
