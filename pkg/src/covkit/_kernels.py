"""Compiled kernels for intersecting large convex polygons.

The intersection of two convex polygons is computed as the intersection of
their edge half-planes, merged by edge angle.  Both inputs are bounded, so
the half-plane set always spans every direction.
"""

import numpy as np
from numba import njit

PARALLEL_EPS = 1e-12
OUT_EPS = 1e-12


@njit(cache=True)
def _inter(px, py, dx, dy, i, j):
    den = dx[i] * dy[j] - dy[i] * dx[j]
    t = ((px[j] - px[i]) * dy[j] - (py[j] - py[i]) * dx[j]) / den
    return px[i] + t * dx[i], py[i] + t * dy[i]


@njit(cache=True)
def _out(px, py, dx, dy, i, x, y):
    return dx[i] * (y - py[i]) - dy[i] * (x - px[i]) < -OUT_EPS


@njit(cache=True)
def halfplane_intersection(px, py, dx, dy, src):
    """Intersect half-planes sorted by direction angle.

    Line ``i`` passes through ``(px[i], py[i])`` with unit direction
    ``(dx[i], dy[i])``; the kept side is the left one.  Returns ``(xs, ys,
    sa, sb)``: the CCW vertices of the intersection and, per vertex, the
    ``src`` labels of the two lines meeting there.  Empty arrays mean an
    empty intersection.
    """
    n = px.shape[0]
    dq = np.empty(n, dtype=np.int64)
    first = 0
    size = 0
    empty = (np.empty(0), np.empty(0), np.empty(0, np.int64), np.empty(0, np.int64))
    for i in range(n):
        while size > 1:
            x, y = _inter(px, py, dx, dy, dq[first + size - 1], dq[first + size - 2])
            if _out(px, py, dx, dy, i, x, y):
                size -= 1
            else:
                break
        while size > 1:
            x, y = _inter(px, py, dx, dy, dq[first], dq[first + 1])
            if _out(px, py, dx, dy, i, x, y):
                first += 1
                size -= 1
            else:
                break
        if size > 0:
            b = dq[first + size - 1]
            cr = dx[i] * dy[b] - dy[i] * dx[b]
            if abs(cr) < PARALLEL_EPS:
                if dx[i] * dx[b] + dy[i] * dy[b] < 0.0:
                    return empty
                if _out(px, py, dx, dy, i, px[b], py[b]):
                    dq[first + size - 1] = i
                continue
        if first + size >= n:
            # compact the deque to the front of the buffer
            for k in range(size):
                dq[k] = dq[first + k]
            first = 0
        dq[first + size] = i
        size += 1
    while size > 2:
        x, y = _inter(px, py, dx, dy, dq[first + size - 1], dq[first + size - 2])
        if _out(px, py, dx, dy, dq[first], x, y):
            size -= 1
        else:
            break
    while size > 2:
        x, y = _inter(px, py, dx, dy, dq[first], dq[first + 1])
        if _out(px, py, dx, dy, dq[first + size - 1], x, y):
            first += 1
            size -= 1
        else:
            break
    if size < 3:
        return empty
    xs = np.empty(size)
    ys = np.empty(size)
    sa = np.empty(size, dtype=np.int64)
    sb = np.empty(size, dtype=np.int64)
    for k in range(size):
        i = dq[first + k]
        j = dq[first + (k + 1) % size]
        x, y = _inter(px, py, dx, dy, i, j)
        xs[k] = x
        ys[k] = y
        sa[k] = src[i]
        sb[k] = src[j]
    return xs, ys, sa, sb


@njit(cache=True)
def shoelace(xs, ys):
    n = xs.shape[0]
    s = 0.0
    for k in range(n):
        j = (k + 1) % n
        s += xs[k] * ys[j] - xs[j] * ys[k]
    return 0.5 * s
