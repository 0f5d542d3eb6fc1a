"""Binary morphology with square structuring elements."""
from __future__ import annotations

import numpy as np


def _sweep(mask: np.ndarray, radius: int, axis: int, erode: bool, outside: bool) -> np.ndarray:
    n = mask.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(mask, pad, constant_values=outside)
    out = np.ones_like(mask) if erode else np.zeros_like(mask)
    for i in range(2 * radius + 1):
        window = padded[i : i + n] if axis == 0 else padded[:, i : i + n]
        if erode:
            out &= window
        else:
            out |= window
    return out


def _square(mask: np.ndarray, kernel: int, erode: bool, outside: bool) -> np.ndarray:
    if kernel % 2 != 1 or kernel < 1:
        raise ValueError("kernel size must be a positive odd number")
    radius = kernel // 2
    mask = np.asarray(mask, dtype=bool)
    if radius == 0:
        return mask.copy()
    return _sweep(_sweep(mask, radius, 0, erode, outside), radius, 1, erode, outside)


def erode(mask: np.ndarray, kernel: int = 3, iterations: int = 1) -> np.ndarray:
    """Erosion by a full k x k square; pixels outside the image count as background."""
    out = np.asarray(mask, dtype=bool)
    for _ in range(iterations):
        out = _square(out, kernel, erode=True, outside=False)
    return out


def dilate(mask: np.ndarray, kernel: int = 3, iterations: int = 1) -> np.ndarray:
    out = np.asarray(mask, dtype=bool)
    for _ in range(iterations):
        out = _square(out, kernel, erode=False, outside=False)
    return out


def close(edges: np.ndarray, kernel: int = 3) -> np.ndarray:
    """Dilation then erosion.

    The erosion step ignores out-of-image pixels (treats them as foreground)
    so that the pair stays adjoint: the result is extensive and idempotent.
    """
    grown = _square(edges, kernel, erode=False, outside=False)
    return _square(grown, kernel, erode=True, outside=True)
