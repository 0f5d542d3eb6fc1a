"""Texture atlas descriptors (legacy and 4.x syntax) and region cropping."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from spritemesh.raster import RasterImage


class AtlasFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class AtlasPage:
    image_file: str
    width: int = 0
    height: int = 0
    format: str = "RGBA8888"
    filter: tuple[str, str] = ("Nearest", "Nearest")
    repeat: str = "none"
    pma: bool = False
    scale: float = 1.0


@dataclass
class AtlasRegion:
    """One packed sprite.  ``width``/``height`` are the unrotated packed size;
    a region with ``rotate == 90`` occupies ``height`` x ``width`` on the page."""

    name: str
    page: int
    x: int
    y: int
    width: int
    height: int
    rotate: int = 0
    orig_width: int = 0
    orig_height: int = 0
    offset_x: int = 0
    offset_y: int = 0
    index: int = -1

    @property
    def page_rect(self) -> tuple[int, int, int, int]:
        """(x, y, w, h) occupied on the page."""
        if self.rotate in (90, 270):
            return self.x, self.y, self.height, self.width
        return self.x, self.y, self.width, self.height


@dataclass
class AtlasIndex:
    pages: list[AtlasPage] = field(default_factory=list)
    regions: list[AtlasRegion] = field(default_factory=list)

    def find(self, name: str) -> AtlasRegion:
        for r in self.regions:
            if r.name == name:
                return r
        raise KeyError(name)


_PAGE_KEYS = {"size", "format", "filter", "repeat", "pma", "scale"}


def _ints(values: list[str], n: int, key: str, line: int) -> list[int]:
    if len(values) != n:
        raise AtlasFormatError(f"{key!r} expects {n} values, got {len(values)}", line)
    try:
        return [int(v) for v in values]
    except ValueError:
        raise AtlasFormatError(f"{key!r} expects integers, got {', '.join(values)}", line) from None


def _rotate(value: str, line: int) -> int:
    v = value.strip().lower()
    if v == "true":
        return 90
    if v == "false":
        return 0
    try:
        deg = int(v)
    except ValueError:
        raise AtlasFormatError(f"bad rotate value {value!r}", line) from None
    if deg % 90:
        raise AtlasFormatError(f"rotate must be a multiple of 90, got {deg}", line)
    return deg % 360


def _finish_region(idx: AtlasIndex, reg: AtlasRegion | None, seen: set, line: int) -> None:
    if reg is None:
        return
    if "orig" not in seen:
        reg.orig_width, reg.orig_height = reg.width, reg.height
    if reg.width < 0 or reg.height < 0:
        raise AtlasFormatError(f"region {reg.name!r} has negative size", line)
    if reg.offset_x < 0 or reg.offset_y < 0 or reg.offset_x + reg.width > reg.orig_width \
            or reg.offset_y + reg.height > reg.orig_height:
        raise AtlasFormatError(f"region {reg.name!r} offsets exceed original size", line)
    page = idx.pages[reg.page]
    x, y, w, h = reg.page_rect
    if page.width and page.height and (x < 0 or y < 0 or x + w > page.width or y + h > page.height):
        raise AtlasFormatError(f"region {reg.name!r} exceeds page {page.image_file!r}", line)
    idx.regions.append(reg)


def parse_atlas(text: str) -> AtlasIndex:
    """Parse ``.atlas`` text in either legacy (xy/size/orig/offset) or 4.x (bounds/offsets) syntax."""
    idx = AtlasIndex()
    page: AtlasPage | None = None
    reg: AtlasRegion | None = None
    seen: set = set()
    reg_line = 0
    expect_page = True
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            _finish_region(idx, reg, seen, reg_line)
            reg = None
            expect_page = True
            continue
        if ":" not in line:
            _finish_region(idx, reg, seen, reg_line)
            reg = None
            if expect_page:
                page = AtlasPage(image_file=line)
                idx.pages.append(page)
                expect_page = False
            else:
                reg = AtlasRegion(name=line, page=len(idx.pages) - 1, x=0, y=0, width=0, height=0)
                seen, reg_line = set(), no
            continue
        key, _, value = line.partition(":")
        key = key.strip()
        values = [v.strip() for v in value.split(",")]
        if page is None:
            raise AtlasFormatError(f"entry {key!r} before any page", no)
        expect_page = False
        if reg is None:
            if key not in _PAGE_KEYS:
                raise AtlasFormatError(f"entry {key!r} outside a region", no)
            if key == "size":
                page.width, page.height = _ints(values, 2, key, no)
            elif key == "format":
                page.format = values[0]
            elif key == "filter":
                if len(values) != 2:
                    raise AtlasFormatError("'filter' expects 2 values", no)
                page.filter = (values[0], values[1])
            elif key == "repeat":
                page.repeat = values[0]
            elif key == "pma":
                page.pma = values[0].lower() == "true"
            elif key == "scale":
                try:
                    page.scale = float(values[0])
                except ValueError:
                    raise AtlasFormatError(f"bad scale {values[0]!r}", no) from None
            continue
        seen.add({"bounds": "xy", "offsets": "orig"}.get(key, key))
        if key == "xy":
            reg.x, reg.y = _ints(values, 2, key, no)
        elif key == "size":
            reg.width, reg.height = _ints(values, 2, key, no)
        elif key == "bounds":
            reg.x, reg.y, reg.width, reg.height = _ints(values, 4, key, no)
        elif key == "orig":
            reg.orig_width, reg.orig_height = _ints(values, 2, key, no)
        elif key == "offset":
            reg.offset_x, reg.offset_y = _ints(values, 2, key, no)
        elif key == "offsets":
            reg.offset_x, reg.offset_y, reg.orig_width, reg.orig_height = _ints(values, 4, key, no)
        elif key == "rotate":
            reg.rotate = _rotate(value, no)
        elif key == "index":
            (reg.index,) = _ints(values, 1, key, no)
        # other keys (split, pad, custom values) carry no geometry
    _finish_region(idx, reg, seen, reg_line)
    return idx


def write_atlas(idx: AtlasIndex, syntax: str = "4.x") -> str:
    """Serialize an index; ``syntax`` is ``"4.x"`` or ``"legacy"``."""
    if syntax not in ("4.x", "legacy"):
        raise ValueError(f"unknown atlas syntax {syntax!r}")
    out: list[str] = []
    for p, page in enumerate(idx.pages):
        if p or syntax == "legacy":
            out.append("")
        out.append(page.image_file)
        out.append(f"size: {page.width}, {page.height}" if syntax == "4.x" else f"size: {page.width},{page.height}")
        out.append(f"format: {page.format}")
        out.append(f"filter: {page.filter[0]}, {page.filter[1]}")
        out.append(f"repeat: {page.repeat}")
        if syntax == "4.x":
            if page.pma:
                out.append("pma: true")
            if page.scale != 1.0:
                out.append(f"scale: {page.scale:g}")
        for r in idx.regions:
            if r.page != p:
                continue
            out.append(r.name)
            if syntax == "4.x":
                out.append(f"  bounds: {r.x}, {r.y}, {r.width}, {r.height}")
                if (r.offset_x, r.offset_y, r.orig_width, r.orig_height) != (0, 0, r.width, r.height):
                    out.append(f"  offsets: {r.offset_x}, {r.offset_y}, {r.orig_width}, {r.orig_height}")
                if r.rotate:
                    out.append(f"  rotate: {r.rotate}")
                if r.index != -1:
                    out.append(f"  index: {r.index}")
            else:
                out.append(f"  rotate: {'true' if r.rotate == 90 else r.rotate if r.rotate else 'false'}")
                out.append(f"  xy: {r.x}, {r.y}")
                out.append(f"  size: {r.width}, {r.height}")
                out.append(f"  orig: {r.orig_width}, {r.orig_height}")
                out.append(f"  offset: {r.offset_x}, {r.offset_y}")
                out.append(f"  index: {r.index}")
    return "\n".join(out) + "\n"


def crop_region(sheet: RasterImage, region: AtlasRegion) -> RasterImage:
    """Cut a region out of its page and restore rotation and stripped whitespace.

    Rotated regions are stored turned 90 degrees clockwise; they are turned
    back counter-clockwise.  The result is ``orig_width x orig_height`` with the
    packed pixels at ``(offset_x, orig_height - offset_y - height)`` (offsets
    are measured from the bottom-left, y up).
    """
    x, y, w, h = region.page_rect
    if x < 0 or y < 0 or x + w > sheet.width or y + h > sheet.height:
        raise ValueError(
            f"region {region.name!r} rect ({x},{y},{w},{h}) outside {sheet.width}x{sheet.height} sheet"
        )
    data = sheet.data
    if data.shape[2] == 3:
        data = np.concatenate([data, np.full(data.shape[:2] + (1,), 255, np.uint8)], axis=2)
    patch = data[y : y + h, x : x + w]
    if region.rotate:
        patch = np.rot90(patch, k=region.rotate // 90)
    ow, oh = region.orig_width, region.orig_height
    canvas = np.zeros((oh, ow, 4), dtype=np.uint8)
    top = oh - region.offset_y - region.height
    canvas[top : top + region.height, region.offset_x : region.offset_x + region.width] = patch
    return RasterImage(canvas)
