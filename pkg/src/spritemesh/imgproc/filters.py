"""Thresholding and smoothing kernels."""
from __future__ import annotations

import math

import numpy as np

from spritemesh.raster import RasterImage


def alpha_threshold(img: RasterImage, tau_alpha: int = 128) -> np.ndarray:
    """Binary mask of pixels whose alpha is strictly above ``tau_alpha``."""
    if img.alpha is None:
        raise ValueError("image has no alpha channel")
    return img.alpha > tau_alpha


def gaussian_kernel(sigma: float) -> np.ndarray:
    radius = int(math.ceil(3 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2 * sigma * sigma))
    return k / k.sum()


def _convolve_axis(arr: np.ndarray, kernel: np.ndarray, axis: int) -> np.ndarray:
    radius = len(kernel) // 2
    pad = [(0, 0)] * arr.ndim
    pad[axis] = (radius, radius)
    padded = np.pad(arr, pad, mode="edge")
    out = np.zeros_like(arr, dtype=np.float64)
    n = arr.shape[axis]
    for i, w in enumerate(kernel):
        out += w * padded.take(np.arange(i, i + n), axis=axis)
    return out


def gaussian_blur(gray: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge replication; returns float64."""
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    kernel = gaussian_kernel(sigma)
    arr = np.asarray(gray, dtype=np.float64)
    return _convolve_axis(_convolve_axis(arr, kernel, 0), kernel, 1)


def bilateral_offsets(d: int, sigma_space: float) -> list[tuple[int, int, float]]:
    """(dy, dx, spatial weight) for every tap of a disk window of diameter ``d``."""
    radius = (d - 1) // 2
    taps = []
    for dy in range(-radius, radius + 1):
        for dx in range(-radius, radius + 1):
            r2 = dy * dy + dx * dx
            if r2 > radius * radius:
                continue
            taps.append((dy, dx, math.exp(-r2 / (2 * sigma_space * sigma_space))))
    return taps


def bilateral_filter(
    img: RasterImage, d: int = 9, sigma_color: float = 75.0, sigma_space: float = 75.0
) -> RasterImage:
    """Joint edge-preserving filter over the RGB channels.

    Range distance is the L1 colour difference summed over channels.  Alpha,
    if present, is passed through untouched.
    """
    if d % 2 != 1 or d < 1:
        raise ValueError("window diameter must be a positive odd number")
    if sigma_color <= 0 or sigma_space <= 0:
        raise ValueError("sigmas must be > 0")
    radius = (d - 1) // 2
    h, w = img.height, img.width
    # planar int16 copies keep every per-tap operation on contiguous rows
    planes = [np.pad(img.data[:, :, c].astype(np.int16), radius, mode="edge") for c in range(3)]
    planes_f = [p.astype(np.float32) for p in planes]
    centre = [p[radius : radius + h, radius : radius + w] for p in planes]
    # colour weight lookup over every possible L1 difference
    lut = np.exp(-(np.arange(3 * 255 + 1, dtype=np.float64) ** 2) / (2 * sigma_color**2))

    acc = [np.zeros((h, w), dtype=np.float32) for _ in range(3)]
    wsum = np.zeros((h, w), dtype=np.float32)
    diff = np.empty((h, w), dtype=np.int16)
    tmp = np.empty((h, w), dtype=np.int16)
    weight = np.empty((h, w), dtype=np.float32)
    prod = np.empty((h, w), dtype=np.float32)
    for dy, dx, ws in bilateral_offsets(d, sigma_space):
        window = (slice(radius + dy, radius + dy + h), slice(radius + dx, radius + dx + w))
        np.subtract(planes[0][window], centre[0], out=diff)
        np.abs(diff, out=diff)
        for c in (1, 2):
            np.subtract(planes[c][window], centre[c], out=tmp)
            np.abs(tmp, out=tmp)
            diff += tmp
        np.take((lut * ws).astype(np.float32), diff, out=weight)
        wsum += weight
        for c in range(3):
            np.multiply(weight, planes_f[c][window], out=prod)
            acc[c] += prod
    out = np.stack([np.rint(a / wsum) for a in acc], axis=2).clip(0, 255).astype(np.uint8)
    if img.channels == 4:
        out = np.concatenate([out, img.alpha[:, :, None]], axis=2)
    return RasterImage(out)
