"""Interior vertices along internal visual boundaries."""
from __future__ import annotations

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.exterior import simplify_dp, subdivide_indices
from spritemesh.imgproc.canny import canny, multi_channel_canny
from spritemesh.imgproc.contours import Contour, extract_edge_chains
from spritemesh.imgproc.distance import distance_transform
from spritemesh.imgproc.filters import bilateral_filter
from spritemesh.imgproc.morphology import close, erode
from spritemesh.raster import RasterImage, to_grayscale


def detect_interior_edges(rgb: RasterImage, mask: np.ndarray, cfg: PipelineConfig | None = None) -> np.ndarray:
    """Edge map of internal boundaries, restricted to the eroded mask."""
    cfg = cfg or PipelineConfig()
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (rgb.height, rgb.width):
        raise ValueError(f"mask shape {mask.shape} does not match image {rgb.height}x{rgb.width}")
    img = rgb
    if cfg.use_bilateral:
        img = bilateral_filter(rgb, cfg.bilateral_d, cfg.bilateral_sigma_color, cfg.bilateral_sigma_space)
    if cfg.multi_channel:
        edges = multi_channel_canny(img, cfg.canny_low, cfg.canny_high)
    else:
        edges = canny(to_grayscale(img), cfg.canny_low, cfg.canny_high)
    inner = erode(mask, cfg.erode_kernel, cfg.erode_iters)
    edges &= inner
    # closing may bridge across the eroded border; clip again
    return close(edges, cfg.close_kernel) & inner


def significant_chains(edges: np.ndarray, min_len: float) -> list[Contour]:
    """Chains at least ``min_len`` long, longest first (ties keep raster order)."""
    chains = [c for c in extract_edge_chains(edges) if c.perimeter >= min_len]
    chains.sort(key=lambda c: -c.perimeter)
    return chains


def chain_candidates(chain: Contour, cfg: PipelineConfig) -> np.ndarray:
    """Keypoints and subdivision points along one chain, in chain order."""
    n = len(chain)
    if n < 2:
        return chain.points.astype(np.float64)
    if cfg.use_dp:
        keys = simplify_dp(chain, cfg.interior_dp_frac * chain.perimeter)
    else:
        keys = list(range(n))
    if cfg.use_subdivision:
        idx = subdivide_indices(chain, keys, cfg.interior_seg_len)
    else:
        idx = keys
    return chain.points[idx].astype(np.float64)


def greedy_dedup(points: np.ndarray, radius: float) -> np.ndarray:
    """Keep points in order, skipping any closer than ``radius`` to one already kept."""
    kept: list[np.ndarray] = []
    cells: dict[tuple[int, int], list[int]] = {}
    r2 = radius * radius
    for p in np.asarray(points, dtype=np.float64).reshape(-1, 2):
        cx, cy = int(p[0] // radius), int(p[1] // radius)
        clash = False
        for gx in (cx - 1, cx, cx + 1):
            for gy in (cy - 1, cy, cy + 1):
                for i in cells.get((gx, gy), ()):
                    d = kept[i] - p
                    if d @ d < r2:
                        clash = True
                        break
                if clash:
                    break
            if clash:
                break
        if not clash:
            cells.setdefault((cx, cy), []).append(len(kept))
            kept.append(p)
    return np.array(kept, dtype=np.float64).reshape(-1, 2)


def place_interior(
    rgb: RasterImage,
    mask: np.ndarray,
    cfg: PipelineConfig | None = None,
    *,
    edges: np.ndarray | None = None,
    dist: np.ndarray | None = None,
) -> np.ndarray:
    """Interior vertices as an (N, 2) float array of pixel positions.

    ``edges`` and ``dist`` may be passed in when already computed for the
    same image and mask.
    """
    cfg = cfg or PipelineConfig()
    if edges is None:
        edges = detect_interior_edges(rgb, mask, cfg)
    chains = significant_chains(edges, cfg.interior_min_len)
    if not chains:
        return np.zeros((0, 2))
    if dist is None:
        dist = distance_transform(mask)
    pool = np.concatenate([chain_candidates(c, cfg) for c in chains])
    xs, ys = pool[:, 0].astype(int), pool[:, 1].astype(int)
    pool = pool[dist[ys, xs] >= cfg.interior_min_boundary_dist]
    return greedy_dedup(pool, cfg.dedup_radius)
