"""Exact Euclidean distance transform (two separable passes)."""
from __future__ import annotations

import numpy as np


def _column_pass(mask: np.ndarray, big: float) -> np.ndarray:
    """Squared vertical distance to the nearest background pixel in each column."""
    h, w = mask.shape
    down = np.empty((h, w), dtype=np.float64)
    run = np.full(w, np.inf)
    for y in range(h):
        run = np.where(mask[y], run + 1, 0.0)
        down[y] = run
    run = np.full(w, np.inf)
    for y in range(h - 1, -1, -1):
        run = np.where(mask[y], run + 1, 0.0)
        np.minimum(down[y], run, out=down[y])
    sq = down * down
    sq[np.isinf(down)] = big
    return sq


def _lower_envelope(f: np.ndarray) -> np.ndarray:
    """Row-wise min over q of (x - q)^2 + f[q], all rows at once.

    Lower envelope of parabolas (Felzenszwalb & Huttenlocher), with the
    per-column step vectorized across rows.
    """
    rows, n = f.shape
    r = np.arange(rows)
    v = np.zeros((rows, n), dtype=np.int64)
    z = np.empty((rows, n + 1), dtype=np.float64)
    z[:, 0] = -np.inf
    z[:, 1] = np.inf
    k = np.zeros(rows, dtype=np.int64)
    for q in range(1, n):
        fq = f[:, q] + q * q
        while True:
            vk = v[r, k]
            s = (fq - (f[r, vk] + vk * vk)) / (2.0 * (q - vk))
            pop = s <= z[r, k]
            if not pop.any():
                break
            k -= pop
        k += 1
        v[r, k] = q
        z[r, k] = s
        z[r, k + 1] = np.inf

    out = np.empty((rows, n), dtype=np.float64)
    k[:] = 0
    for q in range(n):
        while True:
            step = z[r, k + 1] < q
            if not step.any():
                break
            k += step
        vk = v[r, k]
        out[:, q] = (q - vk) ** 2 + f[r, vk]
    return out


def distance_transform(mask: np.ndarray) -> np.ndarray:
    """Euclidean distance from each foreground pixel to the nearest background pixel.

    Background pixels get 0.  If the mask has no background at all, every
    pixel gets the sentinel ``width + height``.
    """
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    out = np.zeros((h, w), dtype=np.float64)
    if h == 0 or w == 0 or not mask.any():
        return out
    sentinel = float(w + h)
    big = sentinel * sentinel
    f = _column_pass(mask, big)
    live = mask.any(axis=1)
    sq = _lower_envelope(f[live])
    sq = np.minimum(sq, big)
    out[live] = np.sqrt(sq)
    out[~mask] = 0.0
    return out
