"""Pixel containers, PNG decode/encode and alpha inspection."""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

MAX_SIDE = 8192
PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


class ImageLoadError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RasterImage:
    """Row-major 8-bit image, ``data`` shaped (height, width, channels).

    Only 3 (RGB) and 4 (RGBA) channel images are represented.  Alpha is
    straight (not premultiplied).
    """

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or data.shape[2] not in (3, 4):
            raise ValueError(f"expected (H, W, 3|4) array, got shape {data.shape}")
        if data.shape[0] == 0 or data.shape[1] == 0:
            raise ValueError("zero-dimension image")
        if data.dtype != np.uint8:
            if data.size and (data.min() < 0 or data.max() > 255):
                raise ValueError("channel values must lie in [0, 255]")
            data = data.astype(np.uint8)
        data = np.ascontiguousarray(data)
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def rgb(self) -> np.ndarray:
        return self.data[:, :, :3]

    @property
    def alpha(self) -> np.ndarray | None:
        return self.data[:, :, 3] if self.channels == 4 else None

    def __eq__(self, other):
        if not isinstance(other, RasterImage):
            return NotImplemented
        return self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"RasterImage({self.width}x{self.height}x{self.channels})"


def _from_pil(img: Image.Image) -> RasterImage:
    mode = img.mode
    if mode in ("I;16", "I;16B", "I;16L", "I"):
        arr = np.asarray(img, dtype=np.int64)
        if mode == "I" and arr.max(initial=0) <= 255:
            gray = arr.clip(0, 255).astype(np.uint8)
        else:
            gray = (arr.clip(0, 65535) >> 8).astype(np.uint8)
        return RasterImage(np.repeat(gray[:, :, None], 3, axis=2))
    if mode == "F":
        gray = np.asarray(img, dtype=np.float64).clip(0, 255).round().astype(np.uint8)
        return RasterImage(np.repeat(gray[:, :, None], 3, axis=2))
    if mode == "P":
        img = img.convert("RGBA" if "transparency" in img.info else "RGB")
    elif mode in ("LA", "PA", "RGBa", "La"):
        img = img.convert("RGBA")
    elif mode == "L" or mode == "1":
        gray = np.asarray(img.convert("L"), dtype=np.uint8)
        return RasterImage(np.repeat(gray[:, :, None], 3, axis=2))
    elif mode not in ("RGB", "RGBA"):
        img = img.convert("RGB")
    return RasterImage(np.asarray(img, dtype=np.uint8))


def decode_image(blob: bytes) -> RasterImage:
    try:
        with Image.open(io.BytesIO(blob)) as img:
            if img.width > MAX_SIDE or img.height > MAX_SIDE:
                raise ImageLoadError(f"image too large: {img.width}x{img.height} (max side {MAX_SIDE})")
            if img.width == 0 or img.height == 0:
                raise ImageLoadError("zero-dimension image")
            img.load()
            return _from_pil(img)
    except UnidentifiedImageError:
        if blob.startswith(PNG_SIGNATURE):
            raise ImageLoadError("unreadable file: corrupt or truncated PNG") from None
        raise ImageLoadError("unsupported format") from None
    except (OSError, SyntaxError, ValueError) as exc:
        if isinstance(exc, ImageLoadError):
            raise
        raise ImageLoadError(f"unreadable file: {exc}") from None


def load_image(path: str | Path) -> RasterImage:
    """Decode an image file (PNG; anything else Pillow reads is a bonus)."""
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise ImageLoadError(f"unreadable file: {path}: {exc.strerror}") from None
    try:
        return decode_image(blob)
    except ImageLoadError as exc:
        raise ImageLoadError(f"{path}: {exc}") from None


def encode_png(img: RasterImage | np.ndarray) -> bytes:
    data = img.data if isinstance(img, RasterImage) else np.asarray(img, dtype=np.uint8)
    buf = io.BytesIO()
    # fixed settings so repeated encodes are byte-identical
    Image.fromarray(np.ascontiguousarray(data)).save(buf, format="PNG", compress_level=6)
    return buf.getvalue()


def save_png(img: RasterImage | np.ndarray, path: str | Path) -> None:
    Path(path).write_bytes(encode_png(img))


def has_meaningful_alpha(img: RasterImage, tau_alpha: int = 128) -> bool:
    """True if the image has an alpha channel that is not uniformly opaque."""
    alpha = img.alpha
    if alpha is None:
        return False
    return bool((alpha <= tau_alpha).any())


def to_grayscale(img: RasterImage | np.ndarray) -> np.ndarray:
    """BT.601 luma, rounded, as a uint8 (H, W) array."""
    data = img.data if isinstance(img, RasterImage) else np.asarray(img)
    if data.ndim != 3 or data.shape[2] < 3:
        raise ValueError("grayscale conversion needs at least 3 channels")
    # integer form of 0.299/0.587/0.114 with round-half-up, exact for R=G=B
    r = data[:, :, 0].astype(np.int32)
    g = data[:, :, 1].astype(np.int32)
    b = data[:, :, 2].astype(np.int32)
    luma = (299 * r + 587 * g + 114 * b + 500) // 1000
    return np.clip(luma, 0, 255).astype(np.uint8)
