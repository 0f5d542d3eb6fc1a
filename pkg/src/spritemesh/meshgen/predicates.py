"""Orientation and in-circle tests with an exact rational fallback.

The float determinant is trusted only when its magnitude clears a
conservative forward-error bound; otherwise the same determinant is
re-evaluated exactly with ``fractions.Fraction`` (every float is a dyadic
rational, so this is exact).
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

# generous multiples of Shewchuk's first-stage bounds
ORIENT_BOUND = 1e-14
INCIRCLE_BOUND = 1e-12


def orient_exact(a, b, c) -> int:
    ax, ay = Fraction(float(a[0])), Fraction(float(a[1]))
    bx, by = Fraction(float(b[0])), Fraction(float(b[1]))
    cx, cy = Fraction(float(c[0])), Fraction(float(c[1]))
    det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (det > 0) - (det < 0)


def incircle_exact(a, b, c, d) -> int:
    """Sign of the in-circle determinant: > 0 when d is inside circle(a, b, c) for CCW abc."""
    dx, dy = Fraction(float(d[0])), Fraction(float(d[1]))
    rows = []
    for p in (a, b, c):
        x = Fraction(float(p[0])) - dx
        y = Fraction(float(p[1])) - dy
        rows.append((x, y, x * x + y * y))
    (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
    det = al * (bx * cy - cx * by) - bl * (ax * cy - cx * ay) + cl * (ax * by - bx * ay)
    return (det > 0) - (det < 0)


def orient(a, b, c) -> int:
    """+1 if a, b, c turn counter-clockwise in the (x, y) frame, -1 clockwise, 0 collinear."""
    left = (b[0] - a[0]) * (c[1] - a[1])
    right = (b[1] - a[1]) * (c[0] - a[0])
    det = left - right
    if abs(det) > ORIENT_BOUND * (abs(left) + abs(right)):
        return 1 if det > 0 else -1
    return orient_exact(a, b, c)


def orient_many(pa: np.ndarray, pb: np.ndarray, p) -> np.ndarray:
    """Vectorized ``orient(pa[i], pb[i], p)``."""
    left = (pb[:, 0] - pa[:, 0]) * (p[1] - pa[:, 1])
    right = (pb[:, 1] - pa[:, 1]) * (p[0] - pa[:, 0])
    det = left - right
    sign = np.sign(det).astype(np.int64)
    unsure = np.abs(det) <= ORIENT_BOUND * (np.abs(left) + np.abs(right))
    for i in np.flatnonzero(unsure):
        sign[i] = orient_exact(pa[i], pb[i], p)
    return sign


def incircle_many(pa: np.ndarray, pb: np.ndarray, pc: np.ndarray, p) -> np.ndarray:
    """Vectorized in-circle sign of point ``p`` against triangles (pa, pb, pc)."""
    ax, ay = pa[:, 0] - p[0], pa[:, 1] - p[1]
    bx, by = pb[:, 0] - p[0], pb[:, 1] - p[1]
    cx, cy = pc[:, 0] - p[0], pc[:, 1] - p[1]
    al = ax * ax + ay * ay
    bl = bx * bx + by * by
    cl = cx * cx + cy * cy
    t1 = bx * cy - cx * by
    t2 = ax * cy - cx * ay
    t3 = ax * by - bx * ay
    det = al * t1 - bl * t2 + cl * t3
    perm = (
        al * (np.abs(bx * cy) + np.abs(cx * by))
        + bl * (np.abs(ax * cy) + np.abs(cx * ay))
        + cl * (np.abs(ax * by) + np.abs(bx * ay))
    )
    sign = np.sign(det).astype(np.int64)
    unsure = np.abs(det) <= INCIRCLE_BOUND * perm
    for i in np.flatnonzero(unsure):
        sign[i] = incircle_exact(pa[i], pb[i], pc[i], p)
    return sign
