"""Incremental Bowyer-Watson Delaunay triangulation.

Instead of a finite super-triangle, the outside of the current convex hull
is covered by "ghost" triangles that share one vertex at infinity.  A ghost
triangle (u, v, GHOST) stands for the open half-plane left of u->v plus the
open segment uv itself, which is what its circumcircle degenerates to.
With exact predicates this keeps the full convex hull triangulated.
"""
from __future__ import annotations

import numpy as np

from spritemesh.meshgen.predicates import incircle_many, orient, orient_many

GHOST = -1


class _Triangles:
    """Growable (n, 3) index store with a live flag."""

    def __init__(self, capacity: int = 64):
        self.tri = np.zeros((capacity, 3), dtype=np.int64)
        self.alive = np.zeros(capacity, dtype=bool)
        self.n = 0

    def add(self, a: int, b: int, c: int) -> None:
        if self.n == len(self.tri):
            self.tri = np.concatenate([self.tri, np.zeros_like(self.tri)])
            self.alive = np.concatenate([self.alive, np.zeros_like(self.alive)])
        self.tri[self.n] = (a, b, c)
        self.alive[self.n] = True
        self.n += 1

    def compact(self) -> None:
        keep = np.flatnonzero(self.alive[: self.n])
        m = len(keep)
        self.tri[:m] = self.tri[keep]
        self.alive[:m] = True
        self.alive[m:] = False
        self.n = m


def _conflicts(store: _Triangles, pts: np.ndarray, p) -> np.ndarray:
    """Indices of live triangles whose (generalised) circumcircle contains p."""
    live = np.flatnonzero(store.alive[: store.n])
    tri = store.tri[live]
    ghost = tri[:, 2] == GHOST
    hits = []

    real = live[~ghost]
    if len(real):
        t = tri[~ghost]
        inside = incircle_many(pts[t[:, 0]], pts[t[:, 1]], pts[t[:, 2]], p) > 0
        hits.append(real[inside])

    gl = live[ghost]
    if len(gl):
        t = tri[ghost]
        pu, pv = pts[t[:, 0]], pts[t[:, 1]]
        side = orient_many(pu, pv, p)
        hit = side > 0
        # on the hull line: conflict only strictly inside the segment
        on_line = np.flatnonzero(side == 0)
        if len(on_line):
            u, v = pu[on_line], pv[on_line]
            t_num = (p[0] - u[:, 0]) * (v[:, 0] - u[:, 0]) + (p[1] - u[:, 1]) * (v[:, 1] - u[:, 1])
            t_den = (v[:, 0] - u[:, 0]) ** 2 + (v[:, 1] - u[:, 1]) ** 2
            hit[on_line] = (t_num > 0) & (t_num < t_den)
        hits.append(gl[hit])
    return np.concatenate(hits) if hits else np.zeros(0, dtype=np.int64)


def delaunay(points) -> np.ndarray:
    """Delaunay triangles of ``points`` as a (K, 3) index array.

    Every triangle is counter-clockwise in the (x, y) frame (positive
    signed area).  Points are inserted in lexicographic (x, y) order, which
    settles co-circular ties deterministically.  Raises ``ValueError`` for
    fewer than 3 points, duplicates, or an all-collinear input.
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    n = len(pts)
    if n < 3:
        raise ValueError("need at least 3 points")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    srt = pts[order]
    if (np.diff(srt, axis=0) == 0).all(axis=1).any():
        raise ValueError("duplicate points")

    a, b = int(order[0]), int(order[1])
    c_pos = None
    for k in range(2, n):
        s = orient(pts[a], pts[b], pts[order[k]])
        if s != 0:
            c_pos = k
            break
    if c_pos is None:
        raise ValueError("all points are collinear")
    c = int(order[c_pos])
    if orient(pts[a], pts[b], pts[c]) < 0:
        a, b = b, a

    store = _Triangles(capacity=max(64, 8 * n))
    store.add(a, b, c)
    # ghosts hang off each hull edge, outside on the left of the stored edge
    store.add(b, a, GHOST)
    store.add(c, b, GHOST)
    store.add(a, c, GHOST)

    rest = [int(i) for k, i in enumerate(order[2:], start=2) if k != c_pos]
    for count, idx in enumerate(rest, start=1):
        p = pts[idx]
        bad = _conflicts(store, pts, p)
        if len(bad) == 0:
            raise RuntimeError(f"point {idx} conflicts with no triangle")
        edges = set()
        for t in store.tri[bad]:
            for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
                edges.add((int(e[0]), int(e[1])))
        store.alive[bad] = False
        for u, v in sorted(edges):
            if (v, u) in edges:
                continue
            if u == GHOST:
                store.add(v, idx, GHOST)
            elif v == GHOST:
                store.add(idx, u, GHOST)
            else:
                store.add(u, v, idx)
        if count % 256 == 0:
            store.compact()

    live = store.tri[: store.n][store.alive[: store.n]]
    real = live[live[:, 2] != GHOST]
    # canonical order: rotate smallest index first, then sort rows
    rot = np.argmin(real, axis=1)
    canon = np.stack([real[np.arange(len(real)), (rot + k) % 3] for k in range(3)], axis=1)
    canon = canon[np.lexsort(canon.T[::-1])]
    return canon
