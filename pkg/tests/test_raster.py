import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from PIL import Image

from spritemesh.raster import (
    ImageLoadError,
    RasterImage,
    decode_image,
    encode_png,
    has_meaningful_alpha,
    load_image,
    to_grayscale,
)


def _png(arr, mode=None):
    buf = io.BytesIO()
    Image.fromarray(arr, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def test_opaque_red_decodes_exactly():
    arr = np.zeros((4, 4, 4), np.uint8)
    arr[..., 0] = 255
    arr[..., 3] = 255
    img = decode_image(_png(arr))
    assert (img.width, img.height, img.channels) == (4, 4, 4)
    assert np.array_equal(img.data, arr)


def test_grayscale_png_replicated_to_rgb():
    gray = np.arange(16, dtype=np.uint8).reshape(4, 4) * 16
    img = decode_image(_png(gray, mode="L"))
    assert img.channels == 3
    for c in range(3):
        assert np.array_equal(img.data[:, :, c], gray)


def test_sixteen_bit_png_is_downscaled():
    arr = np.array([[0, 256, 65535]], dtype=np.uint16)
    img = decode_image(_png(arr.astype(np.uint16)))
    assert img.channels == 3
    assert img.data[0, :, 0].tolist() == [0, 1, 255]


def test_truncated_png_is_unreadable():
    blob = _png(np.zeros((8, 8, 3), np.uint8))
    with pytest.raises(ImageLoadError, match="unreadable"):
        decode_image(blob[: len(blob) // 2])


def test_unknown_bytes_unsupported(tmp_path):
    p = tmp_path / "x.png"
    p.write_bytes(b"not an image at all")
    with pytest.raises(ImageLoadError, match="unsupported"):
        load_image(p)


def test_missing_file(tmp_path):
    with pytest.raises(ImageLoadError, match="unreadable"):
        load_image(tmp_path / "nope.png")


def test_raster_rejects_bad_shapes():
    with pytest.raises(ValueError):
        RasterImage(np.zeros((4, 4, 2), np.uint8))
    with pytest.raises(ValueError, match="zero"):
        RasterImage(np.zeros((0, 4, 3), np.uint8))
    with pytest.raises(ValueError):
        RasterImage(np.full((2, 2, 3), 300))


def test_raster_is_read_only():
    img = RasterImage(np.zeros((2, 2, 3), np.uint8))
    with pytest.raises(ValueError):
        img.data[0, 0, 0] = 1


@pytest.mark.parametrize(
    "alpha, expected",
    [(None, False), (255, False), (129, False), (128, True), (0, True)],
)
def test_has_meaningful_alpha(alpha, expected):
    if alpha is None:
        img = RasterImage(np.zeros((3, 3, 3), np.uint8))
    else:
        arr = np.full((3, 3, 4), 255, np.uint8)
        arr[1, 1, 3] = alpha
        img = RasterImage(arr)
    assert has_meaningful_alpha(img) is expected


def test_grayscale_examples():
    px = np.array([[[255, 255, 255], [255, 0, 0], [0, 0, 0]]], np.uint8)
    assert to_grayscale(px).tolist() == [[255, 76, 0]]
    # hand oracle: round(0.299 * 255) = round(76.245)
    assert round(0.299 * 255) == 76


def test_grayscale_matches_float_formula():
    rng = np.random.default_rng(3)
    arr = rng.integers(0, 256, (40, 40, 3)).astype(np.uint8)
    f = arr.astype(np.float64)
    ref = np.floor(0.299 * f[..., 0] + 0.587 * f[..., 1] + 0.114 * f[..., 2] + 0.5)
    assert np.array_equal(to_grayscale(arr), ref.astype(np.uint8))


@given(st.integers(0, 255))
def test_grayscale_of_gray_is_identity(v):
    assert to_grayscale(np.full((1, 1, 3), v, np.uint8))[0, 0] == v


@settings(max_examples=30, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12), st.sampled_from([3, 4]))))
def test_png_round_trip_is_lossless(arr):
    img = RasterImage(arr)
    again = decode_image(encode_png(img))
    assert again == img
    assert encode_png(again) == encode_png(img)
