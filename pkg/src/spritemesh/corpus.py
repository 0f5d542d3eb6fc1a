"""Seeded synthetic sprites with planted internal colour boundaries.

Each sprite is a smooth blob silhouette (alpha 255 inside, 0 outside, one
pixel of anti-aliasing) whose interior is split by a few wavy curves into
flat-coloured regions.  Small high-contrast square details (think eyes,
rivets, buttons) and mild per-pixel texture noise are layered on top.  The
wavy curves are the "planted" boundaries an interior-aware mesher should
follow; the details are too small to count as significant edges.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from spritemesh.raster import RasterImage


@dataclass(frozen=True)
class CorpusSpec:
    size: int = 1024
    boundaries: tuple[int, int] = (2, 4)
    noise_sigma: float = 3.0
    min_contrast: int = 70
    details: tuple[int, int] = (20, 40)
    detail_size: tuple[int, int] = (4, 10)


def _silhouette(rng: np.random.Generator, size: int) -> np.ndarray:
    """Signed-distance-like field: > 0 inside the blob."""
    yy, xx = np.mgrid[:size, :size].astype(np.float64)
    cx, cy = size / 2 + rng.uniform(-0.04, 0.04, 2) * size
    theta = np.arctan2(yy - cy, xx - cx)
    rad = np.hypot(yy - cy, xx - cx)
    r0 = size * rng.uniform(0.34, 0.42)
    wobble = np.zeros_like(theta)
    for k in (2, 3, 4, 5):
        wobble += rng.uniform(0.0, 0.08 / (k - 1)) * np.cos(k * theta + rng.uniform(0, 2 * np.pi))
    return r0 * (1 + wobble) - rad


def _wavy_boundary(rng: np.random.Generator, size: int) -> np.ndarray:
    """Field whose zero set is a wavy line across the sprite."""
    yy, xx = np.mgrid[:size, :size].astype(np.float64)
    ang = rng.uniform(0, np.pi)
    u = (xx - size / 2) * np.cos(ang) + (yy - size / 2) * np.sin(ang)
    v = -(xx - size / 2) * np.sin(ang) + (yy - size / 2) * np.cos(ang)
    offset = rng.uniform(-0.22, 0.22) * size
    amp = rng.uniform(0.02, 0.06) * size
    freq = rng.uniform(1.0, 2.5) * 2 * np.pi / size
    return v - offset - amp * np.sin(freq * u + rng.uniform(0, 2 * np.pi))


def _palette(rng: np.random.Generator, nbits: int, min_contrast: int) -> np.ndarray:
    """One colour per region code; codes one bit apart (regions sharing a
    boundary) differ by at least ``min_contrast`` in some channel."""
    colours: dict[int, np.ndarray] = {}
    for code in range(2**nbits):
        neighbours = [colours[code ^ (1 << i)] for i in range(nbits) if (code ^ (1 << i)) in colours]
        while True:
            c = rng.integers(30, 226, 3)
            if all(np.abs(c - o).max() >= min_contrast for o in neighbours):
                break
        colours[code] = c
    return np.array([colours[k] for k in range(2**nbits)], dtype=np.float64)


def _stamp_details(rng: np.random.Generator, rgb: np.ndarray, inside: np.ndarray, spec: CorpusSpec) -> None:
    """Paint small near-black or near-white squares at random interior spots."""
    size = rgb.shape[0]
    n = int(rng.integers(spec.details[0], spec.details[1] + 1))
    for _ in range(n):
        s = int(rng.integers(spec.detail_size[0], spec.detail_size[1] + 1))
        x, y = rng.integers(0, size - s, 2)
        if not inside[y : y + s, x : x + s].all():
            continue
        rgb[y : y + s, x : x + s] = 15.0 if rng.random() < 0.5 else 240.0


def generate_sprite(rng: np.random.Generator, spec: CorpusSpec = CorpusSpec()) -> RasterImage:
    size = spec.size
    inside = _silhouette(rng, size)
    nb = int(rng.integers(spec.boundaries[0], spec.boundaries[1] + 1))
    region = np.zeros((size, size), dtype=np.int64)
    for i in range(nb):
        region |= (_wavy_boundary(rng, size) > 0).astype(np.int64) << i
    colours = _palette(rng, nb, spec.min_contrast)
    rgb = colours[region]
    _stamp_details(rng, rgb, inside > 0, spec)
    rgb += rng.normal(0.0, spec.noise_sigma, rgb.shape)
    rgb = np.clip(np.rint(rgb), 0, 255).astype(np.uint8)
    alpha = np.clip(np.rint((inside + 0.5) * 255), 0, 255).astype(np.uint8)
    rgb[alpha == 0] = 0
    return RasterImage(np.concatenate([rgb, alpha[:, :, None]], axis=2))


def generate_corpus(n: int, seed: int = 0, spec: CorpusSpec = CorpusSpec()) -> list[RasterImage]:
    """``n`` sprites; the same seed always yields the same pixels.

    Sprite ``i`` draws from its own stream seeded by ``(seed, i)``, so any
    subset can be regenerated independently (and in parallel).
    """
    return [generate_sprite(np.random.default_rng([seed, i]), spec) for i in range(n)]
