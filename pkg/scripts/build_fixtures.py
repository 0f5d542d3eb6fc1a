"""Regenerate everything under tests/fixtures.

Skeleton goldens come from the oracle in tests/spine_oracle.py, never from
the package's own decoder.  Run from the repository root:

    python3 scripts/build_fixtures.py
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from spine_fixture_defs import GOLDEN, SQUARE_MESH, TRUNCATE_AT  # noqa: E402
from spine_oracle import encode, normalize, render  # noqa: E402

from spritemesh.corpus import CorpusSpec, generate_corpus  # noqa: E402
from spritemesh.raster import RasterImage, save_png  # noqa: E402
from spritemesh.spine.atlas import AtlasIndex, AtlasPage, AtlasRegion, write_atlas  # noqa: E402

PAGE_W, PAGE_H = 256, 128

# name -> (page x, page y, packed w, packed h, rotate, orig w, orig h, offset x, offset y)
REGIONS = {
    "card": (4, 4, 100, 50, 0, 100, 50, 0, 0),
    "flag": (120, 4, 60, 40, 90, 66, 45, 3, 2),
    "gem": (170, 4, 30, 20, 0, 40, 32, 5, 6),
}

FLAG_MESH = {
    "type": "mesh",
    "uvs": [0.125, 0.125, 0.875, 0.125, 0.875, 0.75, 0.5, 0.875, 0.125, 0.75],
    "triangles": [0, 1, 2, 0, 2, 3, 0, 3, 4],
    "vertices": [-25, 17, 25, 17, 25, -11, 0, -17, -25, -11],
    "hull": 5,
}

GT_SKEL = {
    "skeleton": {"hash": "2024", "spine": "4.2.22", "width": 200, "height": 100},
    "bones": [{"name": "root"}],
    "slots": [{"name": "card", "bone": "root", "attachment": "card"},
              {"name": "flag", "bone": "root", "attachment": "flag"},
              {"name": "gem", "bone": "root", "attachment": "gem"}],
    "skins": [{"name": "default", "attachments": {
        "card": {"card": dict(SQUARE_MESH)},
        "flag": {"flag": dict(FLAG_MESH)},
        "gem": {"gem": {"width": 40, "height": 32}},
    }}],
}


def sprite_pixels(name: str, w: int, h: int) -> np.ndarray:
    """Deterministic RGBA artwork at the region's original size."""
    yy, xx = np.mgrid[:h, :w]
    img = np.zeros((h, w, 4), dtype=np.uint8)
    if name == "card":
        img[..., 3] = 255
        img[..., 0] = np.where(xx < w // 2, 200, 40)
        img[..., 1] = np.where(yy < h // 2, 60, 180)
        img[..., 2] = 90
    elif name == "flag":
        inside = (xx >= 3) & (xx < 63) & (yy >= 3) & (yy < 43)
        img[inside, 3] = 255
        img[inside, 0] = (xx[inside] * 4) % 256
        img[inside, 1] = (yy[inside] * 6) % 256
        img[inside, 2] = 128
    else:
        inside = (xx >= 5) & (xx < 35) & (yy >= 6) & (yy < 26)
        img[inside] = (30, 160, 220, 255)
    return img


def build_sheet() -> tuple[np.ndarray, AtlasIndex]:
    sheet = np.zeros((PAGE_H, PAGE_W, 4), dtype=np.uint8)
    idx = AtlasIndex(pages=[AtlasPage("sheet.png", PAGE_W, PAGE_H, "RGBA8888", ("Linear", "Linear"))])
    for name, (x, y, w, h, rot, ow, oh, ox, oy) in REGIONS.items():
        full = sprite_pixels(name, ow, oh)
        top = oh - oy - h
        packed = full[top : top + h, ox : ox + w]
        stored = np.rot90(packed, k=-(rot // 90)) if rot else packed
        sheet[y : y + stored.shape[0], x : x + stored.shape[1]] = stored
        idx.regions.append(AtlasRegion(name, 0, x, y, w, h, rot, ow, oh, ox, oy, -1))
    return sheet, idx


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "fixtures")
    args = ap.parse_args(argv)

    skel_dir = args.out / "skel"
    skel_dir.mkdir(parents=True, exist_ok=True)
    for name, desc in GOLDEN.items():
        doc = normalize(desc)
        (skel_dir / f"{name}.skel").write_bytes(encode(doc))
        (skel_dir / f"{name}.json").write_bytes(render(doc))
    meshes = encode(normalize(GOLDEN["meshes"]))
    (skel_dir / "truncated.skel").write_bytes(meshes[:TRUNCATE_AT])
    (skel_dir / "truncated.error.txt").write_text("section skins\n")
    old = dict(GOLDEN["minimal"], skeleton=dict(GOLDEN["minimal"]["skeleton"], spine="3.8.99"))
    (skel_dir / "badversion.skel").write_bytes(encode(normalize(old)))

    atlas_dir = args.out / "atlas"
    atlas_dir.mkdir(parents=True, exist_ok=True)
    sheet, idx = build_sheet()
    save_png(RasterImage(sheet), atlas_dir / "sheet.png")
    (atlas_dir / "modern.atlas").write_text(write_atlas(idx, "4.x"))
    (atlas_dir / "legacy.atlas").write_text(write_atlas(idx, "legacy"))
    (atlas_dir / "gt.skel").write_bytes(encode(normalize(GT_SKEL)))
    for name, (*_, ow, oh, _ox, _oy) in REGIONS.items():
        save_png(RasterImage(sprite_pixels(name, ow, oh)), atlas_dir / f"{name}.expected.png")

    sprite_dir = args.out / "sprites"
    sprite_dir.mkdir(parents=True, exist_ok=True)
    for i, img in enumerate(generate_corpus(3, seed=7, spec=CorpusSpec(size=384, details=(4, 8)))):
        save_png(img, sprite_dir / f"synthetic_{i}.png")
    save_png(RasterImage(sprite_pixels("card", 100, 50)), sprite_dir / "card.png")
    print(f"fixtures written to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
