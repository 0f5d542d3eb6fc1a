import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import naive_bilateral, naive_gaussian
from spritemesh.imgproc import alpha_threshold, bilateral_filter, gaussian_blur
from spritemesh.imgproc.filters import gaussian_kernel
from spritemesh.raster import RasterImage


def _rgba(alpha):
    a = np.asarray(alpha, dtype=np.uint8)
    return RasterImage(np.dstack([np.zeros(a.shape + (3,), np.uint8), a]))


def test_alpha_threshold_is_strict():
    mask = alpha_threshold(_rgba([[129, 128, 0, 255]]))
    assert mask.tolist() == [[True, False, False, True]]


def test_alpha_threshold_uniform_images():
    assert alpha_threshold(_rgba(np.full((4, 4), 255))).all()
    assert not alpha_threshold(_rgba(np.zeros((4, 4)))).any()


def test_alpha_threshold_needs_alpha():
    with pytest.raises(ValueError):
        alpha_threshold(RasterImage(np.zeros((2, 2, 3), np.uint8)))


def test_gaussian_kernel_radius_and_sum():
    for sigma in (0.5, 1.0, 2.2):
        k = gaussian_kernel(sigma)
        assert len(k) == 2 * int(np.ceil(3 * sigma)) + 1
        assert k.sum() == pytest.approx(1.0, abs=1e-15)


def test_gaussian_constant_is_identity():
    img = np.full((12, 9), 77.0)
    assert np.allclose(gaussian_blur(img, 1.0), 77.0, atol=1e-12)


def test_gaussian_impulse():
    img = np.zeros((9, 9))
    img[4, 4] = 255.0
    out = gaussian_blur(img, 1.0)
    k = gaussian_kernel(1.0)
    assert out[4, 4] == pytest.approx(255.0 * k[3] * k[3], rel=1e-12)
    assert abs(out.sum() - 255.0) <= 1.0
    assert np.allclose(out, naive_gaussian(img, 1.0), atol=1e-9)


def test_gaussian_matches_direct_convolution_on_noise():
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, (64, 64)).astype(np.float64)
    assert np.abs(gaussian_blur(img, 1.0) - naive_gaussian(img, 1.0)).max() < 1e-9


def test_gaussian_rejects_bad_sigma():
    with pytest.raises(ValueError):
        gaussian_blur(np.zeros((3, 3)), 0)


def test_bilateral_constant_unchanged():
    img = RasterImage(np.full((10, 10, 3), (40, 90, 200), np.uint8))
    assert bilateral_filter(img) == img


def test_bilateral_step_edge_keeps_position():
    arr = np.zeros((16, 16, 3), np.uint8)
    arr[:, 8:] = 255
    out = bilateral_filter(RasterImage(arr), 9, 75, 75).data[:, :, 0]
    ref = naive_bilateral(arr, 9, 75, 75)[:, :, 0]
    assert ((out > 128) == (arr[:, :, 0] > 128)).all()
    assert ((ref > 128) == (arr[:, :, 0] > 128)).all()


def test_bilateral_matches_naive_on_random_rgb():
    rng = np.random.default_rng(1)
    arr = rng.integers(0, 256, (32, 32, 3)).astype(np.uint8)
    out = bilateral_filter(RasterImage(arr), 9, 75, 75).data.astype(np.float64)
    ref = naive_bilateral(arr, 9, 75, 75)
    assert np.abs(out - ref).max() <= 1.0


def test_bilateral_passes_alpha_through():
    rng = np.random.default_rng(2)
    arr = rng.integers(0, 256, (8, 8, 4)).astype(np.uint8)
    out = bilateral_filter(RasterImage(arr), 5, 30, 10)
    assert np.array_equal(out.alpha, arr[:, :, 3])


@pytest.mark.parametrize("d", [0, 4, -3])
def test_bilateral_rejects_even_window(d):
    with pytest.raises(ValueError):
        bilateral_filter(RasterImage(np.zeros((4, 4, 3), np.uint8)), d)


@settings(max_examples=15, deadline=None)
@given(
    st.integers(4, 20), st.integers(4, 20), st.sampled_from([3, 5, 9]),
    st.floats(5, 100), st.floats(1, 50), st.integers(0, 2**31),
)
def test_bilateral_within_one_level_of_naive(h, w, d, sc, ss, seed):
    arr = np.random.default_rng(seed).integers(0, 256, (h, w, 3)).astype(np.uint8)
    out = bilateral_filter(RasterImage(arr), d, sc, ss).data.astype(np.float64)
    assert np.abs(out - naive_bilateral(arr, d, sc, ss)).max() <= 1.0
