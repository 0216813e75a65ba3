"""C^2_+ planar bodies described by their radius-of-curvature profile.

A body is stored as samples ``R[k] = R(theta_k)`` on the uniform normal-angle
grid ``theta_k = 2*pi*k/n`` together with the boundary point ``z(0)``.  The
boundary is integrated exactly for the piecewise-linear interpolant of ``R``:

    z(t) = z(0) + int_0^t R(s) u(s + pi/2) ds

For that interpolant the closing condition ``int R(s) u(s) ds = 0`` is
equivalent to the vanishing of the discrete first harmonic of the samples,
which is projected out on construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import EpsTooLarge, NonConvexResult, NonPositiveCurvature, SampleMismatch
from .geometry import Polygon

DEFAULT_N = 4096


def grid(n):
    return 2 * np.pi * np.arange(n) / n


def first_harmonic(R):
    """Coefficients (a, b) of a*cos + b*sin in the samples ``R``."""
    t = grid(len(R))
    return 2.0 * np.mean(R * np.cos(t)), 2.0 * np.mean(R * np.sin(t))


@dataclass(frozen=True, eq=False)
class CurvatureProfile:
    R: np.ndarray

    def __post_init__(self):
        R = np.array(self.R, dtype=float)
        R.setflags(write=False)
        object.__setattr__(self, "R", R)

    @property
    def n(self):
        return len(self.R)

    @property
    def theta(self):
        return grid(self.n)

    def closure_residual(self):
        """|int R(s) u(s+pi/2) ds| for the piecewise-linear interpolant."""
        h = 2 * np.pi / self.n
        w = 2 * (1 - np.cos(h)) / h
        return float(abs(w * np.sum(self.R * np.exp(1j * self.theta))))

    def shifted(self, half_turns=1):
        """Profile of R(theta + half_turns*pi); needs an even sample count."""
        if self.n % 2:
            raise SampleMismatch("a half-turn shift needs an even sample count")
        return CurvatureProfile(np.roll(self.R, -half_turns * (self.n // 2)))

    def interp(self, t):
        """Periodic linear interpolation of R at angles ``t``."""
        t = np.mod(np.asarray(t, dtype=float), 2 * np.pi)
        h = 2 * np.pi / self.n
        k = np.floor(t / h).astype(int) % self.n
        f = t / h - np.floor(t / h)
        return (1 - f) * self.R[k] + f * self.R[(k + 1) % self.n]


@dataclass(frozen=True, eq=False)
class SmoothBody:
    """Strictly convex body with a sampled curvature profile.

    ``projection`` records the first-harmonic coefficients removed from the
    raw input to guarantee closure.
    """

    profile: CurvatureProfile
    base: np.ndarray
    projection: tuple = field(default=(0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, "base", np.array(self.base, dtype=float))

    @property
    def n(self):
        return self.profile.n

    @property
    def R(self):
        return self.profile.R

    @cached_property
    def _steps(self):
        R = self.R
        n = len(R)
        h = 2 * np.pi / n
        e = np.exp(1j * grid(n))
        e1 = np.roll(e, -1)
        R1 = np.roll(R, -1)
        beta = (R1 - R) / h
        return R1 * e1 - R * e + 1j * beta * (e1 - e)

    @cached_property
    def boundary(self):
        """z(theta_k) for every sample angle, shape (n, 2)."""
        z = np.concatenate([[0.0], np.cumsum(self._steps)[:-1]])
        pts = np.column_stack([z.real, z.imag]) + self.base
        pts.setflags(write=False)
        return pts

    def closure_gap(self):
        return float(abs(np.sum(self._steps)))

    def z(self, t):
        """Boundary point(s) with outward normal u(t)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        n = self.n
        h = 2 * np.pi / n
        tm = np.mod(t, 2 * np.pi)
        k = np.floor(tm / h).astype(int) % n
        s = tm
        tk = k * h
        Rk = self.R[k]
        beta = (self.R[(k + 1) % n] - Rk) / h
        f = Rk + beta * (s - tk)
        es = np.exp(1j * s)
        ek = np.exp(1j * tk)
        part = f * es - Rk * ek + 1j * beta * (es - ek)
        zk = self.boundary[k, 0] + 1j * self.boundary[k, 1]
        zz = zk + part
        out = np.column_stack([zz.real, zz.imag])
        return out[0] if scalar else out

    def z_diff(self, t):
        """Boundary point of the difference body: z(t) - z(t + pi)."""
        return self.z(t) - self.z(np.asarray(t) + np.pi)

    def tau(self, t):
        return 1.0 / self.profile.interp(t)

    @cached_property
    def perimeter(self):
        return float(np.sum(self.R) * 2 * np.pi / self.n)

    def polygon(self, m=None):
        """Inscribed polygon on m boundary samples (cached for m = n)."""
        if m is None or m == self.n:
            return self._polygon
        return discretize(self, m)

    @cached_property
    def _polygon(self):
        return Polygon(self.boundary)

    @property
    def area(self):
        return self._polygon.area

    def translated(self, v):
        return SmoothBody(self.profile, self.base + np.asarray(v, dtype=float), self.projection)


def body_from_curvature(R, base=(0.0, 0.0)):
    """Integrate a radius-of-curvature profile into a closed convex body."""
    R = np.asarray(R, dtype=float)
    if R.ndim != 1 or len(R) < 8:
        raise ValueError("need a 1-D profile with at least 8 samples")
    if not np.all(np.isfinite(R)) or np.any(R <= 0):
        raise NonPositiveCurvature(f"min R = {np.min(R):.3g}; profile must be positive")
    a, b = first_harmonic(R)
    t = grid(len(R))
    Rp = R - a * np.cos(t) - b * np.sin(t)
    if np.any(Rp <= 0):
        raise NonPositiveCurvature("profile is not positive after closure projection")
    return SmoothBody(CurvatureProfile(Rp), np.asarray(base, dtype=float), (float(a), float(b)))


def circle(radius=1.0, n=DEFAULT_N, center=(0.0, 0.0)):
    """Disk of given radius; ``center`` is the disk centre, not z(0)."""
    c = np.asarray(center, dtype=float)
    return body_from_curvature(np.full(n, float(radius)), base=c + (radius, 0.0))


def minkowski_sum_smooth(A, B):
    if A.n != B.n:
        raise SampleMismatch(f"sample counts differ: {A.n} vs {B.n}")
    return SmoothBody(CurvatureProfile(A.R + B.R), A.base + B.base, (0.0, 0.0))


def rotate_profile(A, shift=np.pi):
    """Samples of R(theta + shift)."""
    if np.isclose(shift % np.pi, 0.0) and A.n % 2 == 0:
        k = int(round(shift / np.pi)) * (A.n // 2)
        return np.roll(A.R, -k)
    return A.profile.interp(A.profile.theta + shift)


def reflect_smooth(A):
    """The point reflection -A."""
    if A.n % 2:
        raise SampleMismatch("reflection needs an even sample count")
    return SmoothBody(CurvatureProfile(rotate_profile(A, np.pi)), -A.z(np.pi), A.projection)


def difference_body_smooth(A):
    """DK as a smooth body: profile R(theta) + R(theta + pi).

    Its boundary samples are exactly z(theta_k) - z(theta_k + pi), so it
    depends only on the symmetrised profile.  The Minkowski sum of the
    inscribed polygons is a different (2n-gon) approximation that does not
    have this property.
    """
    if A.n % 2:
        raise SampleMismatch("a difference body needs an even sample count")
    R = A.R + np.roll(A.R, -(A.n // 2))
    return SmoothBody(CurvatureProfile(R), A.z_diff(0.0))


def rotate_body(A, angle):
    """Rigid rotation by ``angle`` about o (profile shifted by interpolation)."""
    R = A.profile.interp(A.profile.theta - angle)
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return body_from_curvature(R, base=rot @ A.z(-angle))


def discretize(A, m):
    """Inscribed polygon whose vertices are z(2*pi*j/m)."""
    if m < 16:
        raise ValueError("need at least 16 vertices")
    if m == A.n:
        return Polygon(A.boundary)
    return Polygon(A.z(grid(m)))


def odd_perturbation(A, eps, seed, n_modes=4):
    """A body with profile R + eps*f for a seeded odd f with |f| <= 1.

    ``f`` is a random series in odd harmonics 3, 5, 7, ... so that
    f(theta + pi) = -f(theta), its first harmonic vanishes (closure is
    untouched) and its zero set is finite.
    """
    if not 0 < eps < np.min(A.R):
        raise EpsTooLarge(f"eps must lie in (0, min R = {np.min(A.R):.4g})")
    rng = np.random.default_rng(seed)
    t = A.profile.theta
    f = np.zeros_like(t)
    for j in range(n_modes):
        k = 3 + 2 * j
        a, b = rng.normal(size=2)
        f += (a * np.cos(k * t) + b * np.sin(k * t)) / (1 + j)
    f /= np.max(np.abs(f))
    return SmoothBody(CurvatureProfile(A.R + eps * f), A.base.copy(), A.projection)


def body_from_radial(r, dr, ddr, n=DEFAULT_N, oversample=8):
    """Body whose radius function is r(phi), given r and its two derivatives.

    The curvature profile is resampled onto the normal-angle grid; the base
    point is placed so the body keeps the position implied by ``r``.
    """
    m = n * oversample
    phi = grid(m)
    r0, r1, r2 = r(phi), dr(phi), ddr(phi)
    den = r0**2 + 2 * r1**2 - r0 * r2
    if np.any(den <= 0):
        raise NonConvexResult("radial function does not bound a strictly convex body")
    Rphi = (r0**2 + r1**2) ** 1.5 / den
    theta = phi - np.arctan2(r1, r0)
    # theta is increasing; unwrap onto a monotone copy of [0, 2*pi)
    theta = np.unwrap(theta)
    tt = np.concatenate([theta - 2 * np.pi, theta, theta + 2 * np.pi])
    RR = np.concatenate([Rphi, Rphi, Rphi])
    if np.any(np.diff(tt) <= 0):
        raise NonConvexResult("normal angle is not monotone")
    R = np.interp(grid(n), tt, RR)
    # boundary point with normal angle 0
    phi0 = np.interp(0.0, tt, np.concatenate([phi - 2 * np.pi, phi, phi + 2 * np.pi]))
    rr = float(r(np.array([phi0]))[0])
    base = rr * np.array([np.cos(phi0), np.sin(phi0)])
    return body_from_curvature(R, base=base)
