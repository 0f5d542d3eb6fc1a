"""Mesh quality metrics."""
from __future__ import annotations

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.imgproc.distance import distance_transform
from spritemesh.interior import detect_interior_edges, significant_chains
from spritemesh.meshgen.mesh import TriangleMesh, triangle_areas
from spritemesh.raster import RasterImage


def reference_edge_pixels(edges: np.ndarray, cfg: PipelineConfig) -> np.ndarray:
    """(x, y) pixels of the significant internal edges: chains of at least ``interior_min_len``."""
    chains = significant_chains(edges, cfg.interior_min_len)
    if not chains:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate([c.points for c in chains])


def vertex_distance_field(vertices: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Distance from every pixel to the nearest (rounded) vertex position."""
    h, w = shape
    seeds = np.zeros(shape, dtype=bool)
    v = np.floor(np.asarray(vertices, dtype=np.float64).reshape(-1, 2) + 0.5).astype(np.int64)
    ok = (v[:, 0] >= 0) & (v[:, 0] < w) & (v[:, 1] >= 0) & (v[:, 1] < h)
    seeds[v[ok, 1], v[ok, 0]] = True
    return distance_transform(~seeds)


def boundary_adherence(
    mesh: TriangleMesh,
    rgb: RasterImage,
    mask: np.ndarray,
    cfg: PipelineConfig | None = None,
    tol: float = 10.0,
    *,
    edges: np.ndarray | None = None,
) -> float | None:
    """Fraction of significant internal edge pixels with a mesh vertex within ``tol`` px.

    Returns ``None`` (not applicable) when the sprite has no significant
    internal edges.  The reference edges come from the mesher's own edge
    detector, so the score is biased towards edge-following methods.
    """
    cfg = cfg or PipelineConfig()
    if edges is None:
        edges = detect_interior_edges(rgb, mask, cfg)
    ref = reference_edge_pixels(edges, cfg)
    if len(ref) == 0:
        return None
    if mesh.vertex_count == 0:
        return 0.0
    field = vertex_distance_field(mesh.vertices, edges.shape)
    return float(np.mean(field[ref[:, 1], ref[:, 0]] <= tol))


def triangle_angles(mesh: TriangleMesh) -> np.ndarray:
    """(K, 3) interior angles in radians."""
    v = mesh.vertices[mesh.triangles]
    out = np.empty(v.shape[:2])
    for k in range(3):
        p, q, r = v[:, k], v[:, (k + 1) % 3], v[:, (k + 2) % 3]
        a, b = q - p, r - p
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        dot = (a * b).sum(axis=1)
        out[:, k] = np.arctan2(np.abs(cross), dot)
    return out


def angle_ratio(mesh: TriangleMesh) -> float:
    """Mean over triangles of smallest / largest interior angle."""
    if len(mesh.triangles) == 0:
        raise ValueError("mesh has no triangles")
    if (triangle_areas(mesh.vertices, mesh.triangles) == 0).any():
        raise ValueError("degenerate triangle")
    ang = triangle_angles(mesh)
    return float(np.mean(ang.min(axis=1) / ang.max(axis=1)))


def rasterize(mesh: TriangleMesh, shape: tuple[int, int]) -> np.ndarray:
    """Pixels whose centre lies in the closed union of the mesh triangles."""
    h, w = shape
    covered = np.zeros(shape, dtype=bool)
    v = mesh.vertices
    eps = 1e-9
    for tri in mesh.triangles:
        p = v[tri]
        x0 = max(int(np.ceil(p[:, 0].min() - eps)), 0)
        x1 = min(int(np.floor(p[:, 0].max() + eps)), w - 1)
        y0 = max(int(np.ceil(p[:, 1].min() - eps)), 0)
        y1 = min(int(np.floor(p[:, 1].max() + eps)), h - 1)
        if x0 > x1 or y0 > y1:
            continue
        ys, xs = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
        inside = np.ones(xs.shape, dtype=bool)
        area2 = (p[1, 0] - p[0, 0]) * (p[2, 1] - p[0, 1]) - (p[1, 1] - p[0, 1]) * (p[2, 0] - p[0, 0])
        sign = 1.0 if area2 > 0 else -1.0
        for k in range(3):
            a, b = p[k], p[(k + 1) % 3]
            e = (b[0] - a[0]) * (ys - a[1]) - (b[1] - a[1]) * (xs - a[0])
            inside &= sign * e >= -eps * max(abs(area2), 1.0)
        covered[y0 : y1 + 1, x0 : x1 + 1] |= inside
    return covered


def mask_coverage(mesh: TriangleMesh, mask: np.ndarray) -> float:
    """Share of foreground pixels covered by the rasterized mesh."""
    mask = np.asarray(mask, dtype=bool)
    total = int(mask.sum())
    if total == 0:
        raise ValueError("empty mask")
    covered = rasterize(mesh, mask.shape)
    return float((covered & mask).sum() / total)
