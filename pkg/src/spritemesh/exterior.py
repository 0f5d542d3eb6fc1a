"""Exterior vertices: Douglas-Peucker keypoints plus arc-length subdivision."""
from __future__ import annotations

import math

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.imgproc.contours import Contour, trace_outer_contours
from spritemesh.imgproc.filters import gaussian_blur


def segment_distances(pts: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each row of ``pts`` to the closed segment ab."""
    ab = b - a
    ap = pts - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.hypot(ap[:, 0], ap[:, 1])
    t = np.clip(ap @ ab / denom, 0.0, 1.0)
    d = ap - t[:, None] * ab
    return np.hypot(d[:, 0], d[:, 1])


def diameter_pair(pts: np.ndarray, max_rounds: int = 64) -> tuple[int, int]:
    """Indices of a mutually farthest pair, found by repeated farthest-point sweeps."""
    a = 0
    b = int(np.argmax(((pts - pts[a]) ** 2).sum(axis=1)))
    for _ in range(max_rounds):
        c = int(np.argmax(((pts - pts[b]) ** 2).sum(axis=1)))
        if c == a or np.array_equal(pts[c], pts[a]):
            break
        a, b = b, c
    return min(a, b), max(a, b)


def _dp_range(pts: np.ndarray, first: int, last: int, eps: float, keep: set) -> None:
    stack = [(first, last)]
    while stack:
        i, j = stack.pop()
        if j - i < 2:
            continue
        d = segment_distances(pts[i + 1 : j], pts[i], pts[j])
        k = int(np.argmax(d))
        if d[k] > eps:
            k += i + 1
            keep.add(k)
            stack.append((i, k))
            stack.append((k, j))


def simplify_dp(chain: Contour, eps: float) -> list[int]:
    """Douglas-Peucker keypoint indices into ``chain``, sorted ascending.

    Every dropped point lies within ``eps`` of the segment joining the two
    keypoints that bracket it.  Closed chains are seeded with a mutually
    farthest pair of points.
    """
    n = len(chain)
    if n < 2:
        raise ValueError("degenerate chain: need at least 2 points")
    if eps < 0:
        raise ValueError("eps must be >= 0")
    pts = chain.points.astype(np.float64)
    if not chain.closed:
        keep = {0, n - 1}
        _dp_range(pts, 0, n - 1, eps, keep)
        return sorted(keep)
    a, b = diameter_pair(pts)
    keep = {a, b}
    _dp_range(pts, a, b, eps, keep)
    # second half wraps around the end of the chain
    wrapped = np.concatenate([pts, pts])
    tail = set()
    _dp_range(wrapped, b, a + n, eps, tail)
    keep |= {k % n for k in tail}
    return sorted(keep)


def _arcs(chain: Contour, keypoints: list[int]):
    """(start index, end index in unwrapped space) for each keypoint-to-keypoint arc."""
    kps = list(keypoints)
    pairs = list(zip(kps[:-1], kps[1:]))
    if chain.closed and kps:
        pairs.append((kps[-1], kps[0] + len(chain)))
    return pairs


def subdivide_indices(chain: Contour, keypoints: list[int], max_arc: float) -> list[int]:
    """Chain indices of keypoints plus inserted vertices, in chain order.

    An arc of length L > ``max_arc`` gets ceil(L / max_arc) - 1 inserted
    vertices at equal arc-length spacing, each snapped to the contour pixel
    nearest in arc length.
    """
    if max_arc <= 0:
        raise ValueError("max_arc must be > 0")
    n = len(chain)
    cum = chain.cumulative_length()
    if chain.closed:
        # unwrapped cumulative length over two laps
        cum = np.concatenate([cum[:-1], cum[:-1] + cum[-1], [2 * cum[-1]]])
    out = []
    for i, j in _arcs(chain, keypoints):
        out.append(i % n)
        length = cum[j] - cum[i]
        if length <= max_arc:
            continue
        pieces = math.ceil(length / max_arc)
        seg = cum[i : j + 1]
        for t in range(1, pieces):
            target = cum[i] + t * length / pieces
            k = int(np.searchsorted(seg, target))
            if k > 0 and (k == len(seg) or target - seg[k - 1] <= seg[k] - target):
                k -= 1
            idx = (i + k) % n
            if idx != out[-1]:
                out.append(idx)
    if not chain.closed and keypoints:
        out.append(keypoints[-1])
    # drop snapped duplicates of the following keypoint
    dedup = [out[0]] if out else []
    for idx in out[1:]:
        if idx != dedup[-1]:
            dedup.append(idx)
    if chain.closed and len(dedup) > 1 and dedup[-1] == dedup[0]:
        dedup.pop()
    return dedup


def subdivide_arcs(chain: Contour, keypoints: list[int], max_arc: float) -> np.ndarray:
    """Keypoints plus arc subdivision vertices as float (x, y) points."""
    idx = subdivide_indices(chain, keypoints, max_arc)
    return chain.points[idx].astype(np.float64)


def allocate_budget(perimeters: list[float], total: int, minimum: int = 4) -> list[int]:
    """Split ``total`` proportionally to perimeter (largest remainder), at least ``minimum`` each."""
    perims = np.asarray(perimeters, dtype=np.float64)
    quotas = total * perims / perims.sum()
    counts = np.floor(quotas).astype(int)
    short = total - int(counts.sum())
    # stable sort: equal remainders go to the earlier component
    order = np.argsort(-(quotas - counts), kind="stable")
    for k in order[:short]:
        counts[k] += 1
    return [max(int(c), minimum) for c in counts]


def smooth_mask(mask: np.ndarray, sigma: float) -> np.ndarray:
    """Gaussian-smooth a binary mask and threshold back at half range."""
    return gaussian_blur(np.asarray(mask, dtype=np.float64), sigma) > 0.5


def exterior_contours(mask: np.ndarray, cfg: PipelineConfig) -> list[Contour]:
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError("empty mask")
    contours = trace_outer_contours(smooth_mask(mask, cfg.mask_sigma), cfg.min_component_area)
    if not contours:
        raise ValueError("all components below area threshold")
    return contours


def place_exterior(mask: np.ndarray, cfg: PipelineConfig | None = None) -> list[np.ndarray]:
    """Ordered exterior vertex rings, one (N, 2) float array per kept component."""
    cfg = cfg or PipelineConfig()
    contours = exterior_contours(mask, cfg)
    budgets = allocate_budget([c.perimeter for c in contours], cfg.n_target)
    rings = []
    for contour, budget in zip(contours, budgets):
        keys = simplify_dp(contour, cfg.dp_eps_frac * contour.perimeter)
        rings.append(subdivide_arcs(contour, keys, contour.perimeter / budget))
    return rings
