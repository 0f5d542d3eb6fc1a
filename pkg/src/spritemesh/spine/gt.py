"""Ground-truth meshes from artist-authored mesh attachments."""
from __future__ import annotations

import numpy as np

from spritemesh.meshgen.mesh import TriangleMesh
from spritemesh.raster import RasterImage
from spritemesh.spine.atlas import AtlasRegion
from spritemesh.spine.skel import Attachment


def extract_gt_mesh(att: Attachment, region: AtlasRegion, cropped: RasterImage | None = None) -> TriangleMesh:
    """Map an attachment's region UVs into the cropped sprite's pixel frame.

    Region UVs are relative to the original, unrotated image, so a vertex
    lands at ``(u * orig_width, v * orig_height)`` in the output of
    :func:`crop_region` whether or not the region was packed rotated.
    Bone weights are ignored.
    """
    if att.kind != "mesh" or att.mesh is None:
        raise ValueError(f"attachment {att.name!r} is a {att.type_name}, not a mesh")
    m = att.mesh
    uv = np.asarray(m.uvs, dtype=np.float64).reshape(-1, 2)
    if len(uv) != m.vertex_count:
        raise ValueError(f"{len(uv)} UV pairs for {m.vertex_count} vertices")
    if len(uv) and (uv.min() < 0.0 or uv.max() > 1.0):
        raise ValueError("uv outside [0, 1]")
    tris = np.asarray(m.triangles, dtype=np.int64).reshape(-1, 3)
    if tris.size and (tris.min() < 0 or tris.max() >= len(uv)):
        raise ValueError("triangle index out of range")
    if cropped is not None and (cropped.width, cropped.height) != (region.orig_width, region.orig_height):
        raise ValueError("cropped image does not match the region's original size")
    verts = uv * np.array([region.orig_width, region.orig_height], dtype=np.float64)
    return TriangleMesh(verts, tris, m.hull_count)
