import numpy as np
import pytest
from scipy import ndimage

from spritemesh.config import PipelineConfig
from spritemesh.corpus import CorpusSpec, generate_sprite
from spritemesh.imgproc import alpha_threshold
from spritemesh.interior import detect_interior_edges, greedy_dedup, place_interior
from spritemesh.raster import RasterImage


def _rgb(arr):
    return RasterImage(np.asarray(arr, np.uint8))


def _disk(size=160, r=70):
    yy, xx = np.mgrid[:size, :size]
    return (xx - size / 2) ** 2 + (yy - size / 2) ** 2 <= r * r


def _bar_sprite(length, canvas=(300, 460)):
    """Opaque rectangle ``length + 20`` px tall split by a vertical colour boundary."""
    h, w = canvas
    mask = np.zeros(canvas, bool)
    top = (h - (length + 20)) // 2
    mask[top : top + length + 20, 30 : w - 30] = True
    arr = np.zeros(canvas + (3,), np.uint8)
    arr[mask] = (40, 60, 200)
    right = mask.copy()
    right[:, : w // 2] = False
    arr[right] = (220, 180, 30)
    return _rgb(arr), mask


def test_featureless_sprite():
    mask = _disk()
    img = _rgb(np.full(mask.shape + (3,), 120))
    assert not detect_interior_edges(img, mask).any()
    assert len(place_interior(img, mask)) == 0


def test_half_planes_in_disk():
    mask = _disk()
    arr = np.zeros(mask.shape + (3,), np.uint8)
    arr[:, :80] = (200, 30, 30)
    arr[:, 80:] = (30, 30, 200)
    arr[~mask] = 0
    edges = detect_interior_edges(_rgb(arr), mask)
    cols = np.nonzero(edges.any(axis=0))[0]
    assert len(cols) <= 2 and all(abs(c - 80) <= 1 for c in cols)
    dist = ndimage.distance_transform_edt(mask)
    assert dist[edges].min() >= 10


def test_silhouette_edge_is_excluded():
    mask = _disk()
    arr = np.zeros(mask.shape + (3,), np.uint8)
    arr[mask] = (250, 250, 250)
    assert not detect_interior_edges(_rgb(arr), mask).any()


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        detect_interior_edges(_rgb(np.zeros((10, 10, 3))), np.ones((10, 11), bool))


def test_straight_200px_boundary():
    img, mask = _bar_sprite(200)
    pts = place_interior(img, mask)
    assert len(pts) == 6
    assert np.ptp(pts[:, 0]) <= 1
    ys = np.sort(pts[:, 1])
    assert np.diff(ys).min() >= 18
    assert np.ptp(ys) == pytest.approx(199, abs=1)


def test_short_boundary_contributes_nothing():
    img, mask = _bar_sprite(100)
    assert len(place_interior(img, mask)) == 0
    assert len(place_interior(img, mask, PipelineConfig(interior_min_len=50))) > 0


def test_greedy_dedup_order_and_spacing():
    pts = np.array([[0, 0], [10, 0], [20, 0], [17, 0], [40, 0]], float)
    assert greedy_dedup(pts, 18).tolist() == [[0, 0], [20, 0], [40, 0]]
    assert greedy_dedup(np.zeros((0, 2)), 18).shape == (0, 2)


@pytest.fixture(scope="module")
def sprites():
    spec = CorpusSpec(size=384, details=(4, 8))
    return [generate_sprite(np.random.default_rng([11, i]), spec) for i in range(3)]


def test_interior_gates_on_sprites(sprites):
    cfg = PipelineConfig()
    for img in sprites:
        mask = alpha_threshold(img)
        edges = detect_interior_edges(img, mask, cfg)
        pts = place_interior(img, mask, cfg, edges=edges)
        assert len(pts) > 0
        dist = ndimage.distance_transform_edt(mask)
        assert (dist[pts[:, 1].astype(int), pts[:, 0].astype(int)] >= 6).all()
        d = np.hypot(*(pts[:, None] - pts[None]).transpose(2, 0, 1))
        np.fill_diagonal(d, np.inf)
        assert d.min() >= 18
        edge_dist = ndimage.distance_transform_edt(~edges)
        assert (edge_dist[pts[:, 1].astype(int), pts[:, 0].astype(int)] <= 1).all()


def test_min_length_monotone(sprites):
    img = sprites[0]
    mask = alpha_threshold(img)
    edges = detect_interior_edges(img, mask)
    counts = [len(place_interior(img, mask, PipelineConfig(interior_min_len=L), edges=edges))
              for L in (20, 80, 150, 300, 600, 5000)]
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] == 0
