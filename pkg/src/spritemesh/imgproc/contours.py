"""Border tracing of mask components and ordering of edge pixels into chains."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

SQRT2 = math.sqrt(2.0)
EIGHT = np.ones((3, 3), dtype=bool)

# (dy, dx), clockwise on screen (y grows downwards), starting east
CW = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)]
DIR_INDEX = {d: i for i, d in enumerate(CW)}


def step_lengths(points: np.ndarray, closed: bool) -> np.ndarray:
    """Euclidean length of each step; for closed chains the last is the wrap-around."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        return np.zeros(0)
    nxt = np.roll(pts, -1, axis=0) if closed else pts[1:]
    cur = pts if closed else pts[:-1]
    return np.hypot(*(nxt - cur).T)


@dataclass(frozen=True, eq=False)
class Contour:
    """Ordered 8-connected pixel chain; ``points`` are integer (x, y)."""

    points: np.ndarray
    closed: bool
    perimeter: float = field(init=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64).reshape(-1, 2)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "perimeter", float(step_lengths(pts, self.closed).sum()))

    def __len__(self):
        return len(self.points)

    def cumulative_length(self) -> np.ndarray:
        """Arc length at each point (and, for closed chains, one extra entry for the return to start)."""
        return np.concatenate([[0.0], np.cumsum(step_lengths(self.points, self.closed))])

    def signed_area(self) -> float:
        x, y = self.points[:, 0].astype(float), self.points[:, 1].astype(float)
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"Contour({len(self.points)} px, {kind}, length={self.perimeter:.1f})"


def _trace_border(local: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Suzuki-Abe outer border following on a zero-padded binary array."""
    i, j = start
    # 3.1: clockwise from the west neighbour
    first = None
    w = DIR_INDEX[(0, -1)]
    for t in range(8):
        dy, dx = CW[(w + t) % 8]
        if local[i + dy, j + dx]:
            first = (i + dy, j + dx)
            break
    if first is None:
        return [(i, j)]
    prev, cur = first, (i, j)
    out = []
    while True:
        # 3.3: counter-clockwise, starting just after prev
        d = DIR_INDEX[(prev[0] - cur[0], prev[1] - cur[1])]
        nxt = None
        for t in range(1, 9):
            dy, dx = CW[(d - t) % 8]
            if local[cur[0] + dy, cur[1] + dx]:
                nxt = (cur[0] + dy, cur[1] + dx)
                break
        out.append(cur)
        if nxt == (i, j) and cur == first:
            return out
        prev, cur = cur, nxt


def trace_outer_contours(mask: np.ndarray, min_area: int = 100) -> list[Contour]:
    """One closed outer border per 8-connected component with at least ``min_area`` pixels.

    Chains run counter-clockwise in the (x, y) pixel frame (positive
    shoelace area) and start at the component's raster-first pixel.
    Components are returned in raster order of that pixel.  Holes are not
    traced.
    """
    mask = np.asarray(mask, dtype=bool)
    labels, n = ndimage.label(mask, structure=EIGHT)
    if n == 0:
        return []
    areas = np.bincount(labels.ravel())
    found = []
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None or areas[lab] < min_area:
            continue
        local = np.pad(labels[sl] == lab, 1)
        y0, x0 = sl[0].start - 1, sl[1].start - 1
        row = int(np.argmax(local.any(axis=1)))
        col = int(np.argmax(local[row]))
        border = _trace_border(local, (row, col))
        pts = np.array([(c + x0, r + y0) for r, c in border], dtype=np.int64)
        contour = Contour(pts, closed=True)
        if len(pts) > 2 and contour.signed_area() < 0:
            contour = Contour(np.concatenate([pts[:1], pts[:0:-1]]), closed=True)
        found.append(((row + y0, col + x0), contour))
    found.sort(key=lambda item: item[0])
    return [c for _, c in found]


def _m_neighbours(p, pixels):
    """m-adjacency: diagonal links only where no shared 4-neighbour exists."""
    y, x = p
    out = []
    for dy, dx in ((0, 1), (1, 0), (0, -1), (-1, 0)):
        q = (y + dy, x + dx)
        if q in pixels:
            out.append((q, 1.0))
    for dy, dx in ((1, 1), (1, -1), (-1, -1), (-1, 1)):
        q = (y + dy, x + dx)
        if q in pixels and (y + dy, x) not in pixels and (y, x + dx) not in pixels:
            out.append((q, SQRT2))
    return out


def _dijkstra(source, pixels, adj):
    dist = {source: 0.0}
    prev = {source: None}
    heap = [(0.0, source)]
    while heap:
        d, p = heapq.heappop(heap)
        if d > dist[p]:
            continue
        for q, w in adj[p]:
            nd = d + w
            if nd < dist.get(q, math.inf) - 1e-12:
                dist[q] = nd
                prev[q] = p
                heapq.heappush(heap, (nd, q))
    return dist, prev


def _farthest(dist, candidates):
    # ties go to the raster-first pixel
    return max(candidates, key=lambda p: (round(dist[p], 9), -p[0], -p[1]))


def _one_chain(component: set, adj: dict) -> tuple[list, bool]:
    if len(component) == 1:
        return [next(iter(component))], False
    ends = sorted(p for p in component if len(adj[p]) <= 1)
    start = ends[0] if ends else min(component)
    if not ends and all(len(adj[p]) == 2 for p in component):
        path = [start]
        prev, cur = None, start
        cur_next = min(q for q, _ in adj[start])
        while cur_next != start:
            prev, cur = cur, cur_next
            path.append(cur)
            cur_next = next(q for q, _ in adj[cur] if q != prev)
        return path, True
    pool = ends if ends else sorted(component)
    dist, _ = _dijkstra(start, component, adj)
    a = _farthest(dist, pool)
    dist, prev = _dijkstra(a, component, adj)
    b = _farthest(dist, pool)
    path = []
    p = b
    while p is not None:
        path.append(p)
        p = prev[p]
    path.reverse()
    return path, False


def extract_edge_chains(edges: np.ndarray) -> list[Contour]:
    """Order edge pixels into chains, each pixel used exactly once.

    Within an 8-connected group the longest endpoint-to-endpoint path is
    taken first (double Dijkstra sweep), then the leftover branches are
    chained the same way.  A group that is a simple loop becomes one
    closed chain.
    """
    edges = np.asarray(edges, dtype=bool)
    labels, n = ndimage.label(edges, structure=EIGHT)
    chains = []
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        ys, xs = np.nonzero(labels[sl] == lab)
        remaining = set(zip((ys + sl[0].start).tolist(), (xs + sl[1].start).tolist()))
        while remaining:
            adj = {p: _m_neighbours(p, remaining) for p in remaining}
            seen = set()
            for seed in sorted(remaining):
                if seed in seen:
                    continue
                comp = {seed}
                stack = [seed]
                while stack:
                    p = stack.pop()
                    for q, _ in adj[p]:
                        if q not in comp:
                            comp.add(q)
                            stack.append(q)
                seen |= comp
                path, closed = _one_chain(comp, adj)
                chains.append(Contour(np.array([(x, y) for y, x in path]), closed=closed))
                remaining.difference_update(path)
    return chains
