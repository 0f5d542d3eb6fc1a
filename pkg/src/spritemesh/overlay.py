"""Wireframe overlays of a mesh on its sprite (PNG or SVG)."""
from __future__ import annotations

import base64

import numpy as np
from PIL import Image, ImageDraw

from spritemesh.meshgen.mesh import TriangleMesh
from spritemesh.raster import RasterImage, encode_png

EDGE_COLOR = (0, 200, 0, 255)
EXTERIOR_COLOR = (40, 90, 255, 255)
INTERIOR_COLOR = (255, 210, 0, 255)


def mesh_edges(mesh: TriangleMesh) -> np.ndarray:
    """Unique undirected edges (E, 2), sorted."""
    t = mesh.triangles
    if len(t) == 0:
        return np.zeros((0, 2), dtype=np.int64)
    e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    e.sort(axis=1)
    return np.unique(e, axis=0)


def _check_frame(sprite: RasterImage, source: dict | None) -> None:
    if source is None:
        return
    if (int(source["width"]), int(source["height"])) != (sprite.width, sprite.height):
        raise ValueError(
            f"mesh frame {source['width']}x{source['height']} does not match sprite {sprite.width}x{sprite.height}"
        )


def render_png(sprite: RasterImage, mesh: TriangleMesh, source: dict | None = None) -> bytes:
    """1-px wireframe over the sprite; exterior and interior vertices as 3x3 dots."""
    _check_frame(sprite, source)
    base = sprite.data if sprite.channels == 4 else np.dstack([sprite.data, np.full(sprite.data.shape[:2], 255, np.uint8)])
    img = Image.fromarray(np.ascontiguousarray(base), "RGBA")
    draw = ImageDraw.Draw(img)
    v = mesh.vertices
    for a, b in mesh_edges(mesh):
        draw.line([tuple(v[a]), tuple(v[b])], fill=EDGE_COLOR, width=1)
    for i, (x, y) in enumerate(v):
        colour = EXTERIOR_COLOR if i < mesh.hull_count else INTERIOR_COLOR
        draw.rectangle([x - 1, y - 1, x + 1, y + 1], fill=colour)
    return encode_png(np.asarray(img))


def render_svg(sprite: RasterImage, mesh: TriangleMesh, source: dict | None = None) -> bytes:
    """SVG with the sprite embedded, one ``<polygon>`` per triangle and one ``<circle>`` per vertex."""
    _check_frame(sprite, source)
    w, h = sprite.width, sprite.height
    href = "data:image/png;base64," + base64.b64encode(encode_png(sprite)).decode("ascii")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<image width="{w}" height="{h}" href="{href}"/>',
        '<g fill="none" stroke="rgb(0,200,0)" stroke-width="1">',
    ]
    v = mesh.vertices
    for tri in mesh.triangles:
        pts = " ".join(f"{v[i, 0]:.3f},{v[i, 1]:.3f}" for i in tri)
        out.append(f'<polygon points="{pts}"/>')
    out.append("</g>")
    for i, (x, y) in enumerate(v):
        cls = "exterior" if i < mesh.hull_count else "interior"
        fill = "rgb(40,90,255)" if i < mesh.hull_count else "rgb(255,210,0)"
        out.append(f'<circle class="{cls}" cx="{x:.3f}" cy="{y:.3f}" r="1.5" fill="{fill}"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
