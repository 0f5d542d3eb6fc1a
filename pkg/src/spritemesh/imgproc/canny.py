"""Canny edge detection without internal pre-blur."""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from spritemesh.raster import RasterImage, to_grayscale

EIGHT = np.ones((3, 3), dtype=bool)


def sobel(channel: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """3x3 Sobel derivatives (x to the right, y down), edge-replicated borders."""
    p = np.pad(np.asarray(channel, dtype=np.float64), 1, mode="edge")
    h, w = p.shape[0] - 2, p.shape[1] - 2

    def at(dy, dx):
        return p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

    gx = (at(-1, 1) + 2 * at(0, 1) + at(1, 1)) - (at(-1, -1) + 2 * at(0, -1) + at(1, -1))
    gy = (at(1, -1) + 2 * at(1, 0) + at(1, 1)) - (at(-1, -1) + 2 * at(-1, 0) + at(-1, 1))
    return gx, gy


def gradient_magnitude(channel: np.ndarray) -> np.ndarray:
    gx, gy = sobel(channel)
    return np.hypot(gx, gy)


def non_max_suppression(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Thin gradient magnitude to ridges along 4 quantized directions."""
    mag = np.hypot(gx, gy)
    h, w = mag.shape
    p = np.pad(mag, 1)

    def at(dy, dx):
        return p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]

    angle = np.degrees(np.arctan2(gy, gx)) % 180.0
    horiz = (angle < 22.5) | (angle >= 157.5)
    diag = (angle >= 22.5) & (angle < 67.5)
    vert = (angle >= 67.5) & (angle < 112.5)
    anti = (angle >= 112.5) & (angle < 157.5)

    keep = np.zeros_like(mag, dtype=bool)
    # strict on the "before" side, non-strict after: one pixel wins on plateaus
    keep |= horiz & (mag > at(0, -1)) & (mag >= at(0, 1))
    keep |= vert & (mag > at(-1, 0)) & (mag >= at(1, 0))
    keep |= diag & (mag > at(-1, -1)) & (mag >= at(1, 1))
    keep |= anti & (mag > at(-1, 1)) & (mag >= at(1, -1))
    return np.where(keep & (mag > 0), mag, 0.0)


def hysteresis(thin: np.ndarray, t_low: float, t_high: float) -> np.ndarray:
    weak = thin >= t_low
    if not weak.any():
        return weak
    labels, n = ndimage.label(weak, structure=EIGHT)
    seeded = np.zeros(n + 1, dtype=bool)
    seeded[labels[thin >= t_high]] = True
    seeded[0] = False
    return seeded[labels]


def canny(channel: np.ndarray, t_low: float = 40, t_high: float = 120) -> np.ndarray:
    """Boolean edge map of a single-channel image."""
    if not t_low < t_high:
        raise ValueError("t_low must be < t_high")
    gx, gy = sobel(channel)
    return hysteresis(non_max_suppression(gx, gy), t_low, t_high)


def multi_channel_canny(img: RasterImage, t_low: float = 40, t_high: float = 120) -> np.ndarray:
    """Union of Canny edges on grayscale, R, G and B."""
    if img.channels < 3:
        raise ValueError("need an RGB image")
    edges = canny(to_grayscale(img), t_low, t_high)
    for c in range(3):
        edges |= canny(img.data[:, :, c], t_low, t_high)
    return edges
