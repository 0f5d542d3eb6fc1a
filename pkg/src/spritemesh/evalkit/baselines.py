"""Comparison meshers: hull only, uniform grid interior, Shi-Tomasi interior."""
from __future__ import annotations

import math

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.exterior import place_exterior
from spritemesh.imgproc.canny import sobel
from spritemesh.imgproc.distance import distance_transform
from spritemesh.imgproc.morphology import erode
from spritemesh.interior import greedy_dedup
from spritemesh.meshgen.mesh import TriangleMesh, merge_vertices, triangulate
from spritemesh.raster import RasterImage, to_grayscale


def _with_interior(mask, cfg, interior) -> TriangleMesh:
    vs = merge_vertices(place_exterior(mask, cfg), interior, cfg.vertex_merge_dist)
    return triangulate(vs, mask)


def baseline_hull(mask: np.ndarray, cfg: PipelineConfig | None = None) -> TriangleMesh:
    """Exterior contour vertices only."""
    cfg = cfg or PipelineConfig()
    return _with_interior(np.asarray(mask, dtype=bool), cfg, np.zeros((0, 2)))


def default_grid_spacing(mask: np.ndarray) -> float:
    return math.sqrt(max(int(np.count_nonzero(mask)), 1) / 450.0)


def grid_points(mask: np.ndarray, spacing: float, min_dist: float, dist: np.ndarray | None = None) -> np.ndarray:
    """Lattice anchored at the mask's top-left bounding corner, kept where boundary distance >= ``min_dist``."""
    if spacing <= 0:
        raise ValueError("spacing must be > 0")
    mask = np.asarray(mask, dtype=bool)
    ys, xs = np.nonzero(mask)
    if len(xs) == 0:
        return np.zeros((0, 2))
    gx = np.arange(xs.min(), xs.max() + 1e-9, spacing)
    gy = np.arange(ys.min(), ys.max() + 1e-9, spacing)
    px, py = np.meshgrid(gx, gy)
    pts = np.stack([px.ravel(), py.ravel()], axis=1)
    if dist is None:
        dist = distance_transform(mask)
    ix = np.floor(pts + 0.5).astype(np.int64)
    ix[:, 0] = ix[:, 0].clip(0, mask.shape[1] - 1)
    ix[:, 1] = ix[:, 1].clip(0, mask.shape[0] - 1)
    return pts[dist[ix[:, 1], ix[:, 0]] >= min_dist]


def baseline_grid(
    mask: np.ndarray, cfg: PipelineConfig | None = None, spacing: float | None = None
) -> TriangleMesh:
    """Exterior vertices plus a regular interior lattice."""
    cfg = cfg or PipelineConfig()
    mask = np.asarray(mask, dtype=bool)
    spacing = default_grid_spacing(mask) if spacing is None else spacing
    return _with_interior(mask, cfg, grid_points(mask, spacing, cfg.interior_min_boundary_dist))


def _smooth121(a: np.ndarray) -> np.ndarray:
    p = np.pad(a, 1, mode="edge")
    rows = (p[:-2] + 2 * p[1:-1] + p[2:]) / 4
    return (rows[:, :-2] + 2 * rows[:, 1:-1] + rows[:, 2:]) / 4


def min_eigenvalue(gray: np.ndarray) -> np.ndarray:
    """Smaller eigenvalue of the 3x3-Gaussian-windowed structure tensor."""
    gx, gy = sobel(gray)
    a = _smooth121(gx * gx)
    b = _smooth121(gx * gy)
    c = _smooth121(gy * gy)
    return np.maximum((a + c) / 2 - np.sqrt(((a - c) / 2) ** 2 + b * b), 0.0)


def _is_local_max(score: np.ndarray) -> np.ndarray:
    p = np.pad(score, 1, constant_values=-np.inf)
    h, w = score.shape
    peak = np.ones(score.shape, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            peak &= score >= p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
    return peak


def shi_tomasi_corners(
    gray: np.ndarray,
    allowed: np.ndarray | None = None,
    max_corners: int = 600,
    quality: float = 0.01,
    min_distance: float = 18.0,
) -> np.ndarray:
    """Corner positions (x, y), strongest first."""
    score = min_eigenvalue(gray)
    if allowed is not None:
        score = np.where(allowed, score, 0.0)
    best = score.max(initial=0.0)
    if best <= 0:
        return np.zeros((0, 2))
    cand = _is_local_max(score) & (score >= quality * best) & (score > 0)
    ys, xs = np.nonzero(cand)
    # strongest first; ties in raster order
    order = np.lexsort((xs, ys, -score[ys, xs]))
    pts = np.stack([xs[order], ys[order]], axis=1).astype(np.float64)
    return greedy_dedup(pts, min_distance)[:max_corners]


def baseline_shi_tomasi(
    rgb: RasterImage,
    mask: np.ndarray,
    cfg: PipelineConfig | None = None,
    max_corners: int = 600,
    quality: float = 0.01,
    min_distance: float = 18.0,
) -> TriangleMesh:
    """Exterior vertices plus Shi-Tomasi corners inside the eroded mask."""
    cfg = cfg or PipelineConfig()
    mask = np.asarray(mask, dtype=bool)
    allowed = erode(mask, cfg.erode_kernel, cfg.erode_iters)
    allowed &= distance_transform(mask) >= cfg.interior_min_boundary_dist
    corners = shi_tomasi_corners(to_grayscale(rgb), allowed, max_corners, quality, min_distance)
    return _with_interior(mask, cfg, corners)
