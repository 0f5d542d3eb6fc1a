"""Vertex merging, centroid filtering, mesh assembly and the mesh JSON format."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.exterior import place_exterior
from spritemesh.imgproc.distance import distance_transform
from spritemesh.interior import detect_interior_edges, place_interior
from spritemesh.meshgen.delaunay import delaunay
from spritemesh.raster import RasterImage

MESH_FORMAT_VERSION = 1


def triangle_areas(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Signed areas in the (x, y) pixel frame; positive means counter-clockwise."""
    v = np.asarray(vertices, dtype=np.float64)
    t = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    a, b, c = v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]
    return 0.5 * ((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))


@dataclass(frozen=True, eq=False)
class TriangleMesh:
    """Vertices (N, 2) in pixels with the exterior ones first, triangles (K, 3)."""

    vertices: np.ndarray
    triangles: np.ndarray
    hull_count: int

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 2)
        t = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        if not 0 <= self.hull_count <= len(v):
            raise ValueError(f"hull_count {self.hull_count} out of range for {len(v)} vertices")
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise ValueError("triangle index out of range")
        if t.size and (triangle_areas(v, t) == 0).any():
            raise ValueError("degenerate triangle")
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def interior_count(self) -> int:
        return len(self.vertices) - self.hull_count

    def __eq__(self, other):
        if not isinstance(other, TriangleMesh):
            return NotImplemented
        return (
            self.hull_count == other.hull_count
            and np.array_equal(self.vertices, other.vertices)
            and np.array_equal(self.triangles, other.triangles)
        )

    def __repr__(self):
        return f"TriangleMesh({len(self.vertices)} vertices, {len(self.triangles)} triangles, hull={self.hull_count})"


@dataclass
class VertexSet:
    exterior: np.ndarray
    interior: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.concatenate([self.exterior, self.interior]).reshape(-1, 2)


def merge_vertices(exterior, interior, merge_dist: float = 2.0) -> VertexSet:
    """Greedy de-duplication; earlier points win, exterior before interior."""
    ext = [np.asarray(r, dtype=np.float64).reshape(-1, 2) for r in exterior]
    ext_pts = np.concatenate(ext) if ext else np.zeros((0, 2))
    int_pts = np.asarray(interior, dtype=np.float64).reshape(-1, 2)
    cell = max(merge_dist, 1e-9)
    grid: dict[tuple[int, int], list[np.ndarray]] = {}

    def take(p) -> bool:
        cx, cy = int(np.floor(p[0] / cell)), int(np.floor(p[1] / cell))
        for gx in (cx - 1, cx, cx + 1):
            for gy in (cy - 1, cy, cy + 1):
                for q in grid.get((gx, gy), ()):
                    if np.hypot(*(q - p)) <= merge_dist:
                        return False
        grid.setdefault((cx, cy), []).append(p)
        return True

    keep_ext = [p for p in ext_pts if take(p)]
    keep_int = [p for p in int_pts if take(p)]
    if len(keep_ext) + len(keep_int) < 3:
        raise ValueError("fewer than 3 vertices survive merging")
    return VertexSet(np.array(keep_ext).reshape(-1, 2), np.array(keep_int).reshape(-1, 2))


def filter_by_centroid(points, triangles, mask) -> np.ndarray:
    """Keep triangles whose centroid rounds onto a foreground pixel."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    tris = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    mask = np.asarray(mask, dtype=bool)
    if len(tris) == 0:
        return tris
    centroid = pts[tris].mean(axis=1)
    cx = np.floor(centroid[:, 0] + 0.5).astype(np.int64)
    cy = np.floor(centroid[:, 1] + 0.5).astype(np.int64)
    h, w = mask.shape
    inside = (cx >= 0) & (cx < w) & (cy >= 0) & (cy < h)
    keep = np.zeros(len(tris), dtype=bool)
    keep[inside] = mask[cy[inside], cx[inside]]
    return tris[keep]


def reindex(points: np.ndarray, triangles: np.ndarray, hull_count: int) -> TriangleMesh:
    """Drop unreferenced vertices, keeping relative order (and so the exterior prefix)."""
    used = np.zeros(len(points), dtype=bool)
    used[np.asarray(triangles, dtype=np.int64).ravel()] = True
    new_index = np.cumsum(used) - 1
    return TriangleMesh(
        vertices=points[used],
        triangles=new_index[triangles] if len(triangles) else np.zeros((0, 3), dtype=np.int64),
        hull_count=int(used[:hull_count].sum()),
    )


def triangulate(vs: VertexSet, mask: np.ndarray) -> TriangleMesh:
    pts = vs.points
    tris = filter_by_centroid(pts, delaunay(pts), mask)
    return reindex(pts, tris, len(vs.exterior))


@dataclass
class MeshBuild:
    mesh: TriangleMesh
    exterior: int
    interior: int
    timings: dict = field(default_factory=dict)
    edges: np.ndarray | None = None
    dist: np.ndarray | None = None


def build_mesh_detailed(
    rgb: RasterImage,
    mask: np.ndarray,
    cfg: PipelineConfig | None = None,
    *,
    interior: bool = True,
    edges: np.ndarray | None = None,
    dist: np.ndarray | None = None,
) -> MeshBuild:
    """Full pipeline with per-stage wall time (milliseconds) and intermediates."""
    cfg = cfg or PipelineConfig()
    mask = np.asarray(mask, dtype=bool)
    timings = {}

    t0 = time.perf_counter()
    rings = place_exterior(mask, cfg)
    t1 = time.perf_counter()
    timings["exterior"] = (t1 - t0) * 1000

    inner = np.zeros((0, 2))
    if interior:
        if edges is None:
            edges = detect_interior_edges(rgb, mask, cfg)
        if dist is None:
            dist = distance_transform(mask)
        inner = place_interior(rgb, mask, cfg, edges=edges, dist=dist)
    t2 = time.perf_counter()
    timings["interior"] = (t2 - t1) * 1000

    vs = merge_vertices(rings, inner, cfg.vertex_merge_dist)
    mesh = triangulate(vs, mask)
    t3 = time.perf_counter()
    timings["triangulation"] = (t3 - t2) * 1000
    return MeshBuild(mesh, len(vs.exterior), len(vs.interior), timings, edges, dist)


def build_mesh(rgb: RasterImage, mask: np.ndarray, cfg: PipelineConfig | None = None) -> TriangleMesh:
    """Exterior and interior placement, merge, Delaunay, centroid filter, reindex."""
    return build_mesh_detailed(rgb, mask, cfg).mesh


def _fmt(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def export_mesh_json(mesh: TriangleMesh, source: dict) -> bytes:
    """Serialize to the mesh JSON format (UTF-8, fixed key order, 3-decimal floats)."""
    src = {"image": str(source.get("image", "")), "width": int(source["width"]), "height": int(source["height"])}
    verts = ",".join(f"[{_fmt(x)},{_fmt(y)}]" for x, y in mesh.vertices)
    tris = ",".join(f"[{a},{b},{c}]" for a, b, c in mesh.triangles.tolist())
    stats = {
        "exterior": mesh.hull_count,
        "interior": mesh.interior_count,
        "triangleCount": len(mesh.triangles),
    }
    text = (
        f'{{"version":{MESH_FORMAT_VERSION},'
        f'"source":{json.dumps(src, separators=(",", ":"), ensure_ascii=False)},'
        f'"hullCount":{mesh.hull_count},'
        f'"vertices":[{verts}],'
        f'"triangles":[{tris}],'
        f'"stats":{json.dumps(stats, separators=(",", ":"))}}}'
    )
    return text.encode("utf-8")


def load_mesh_json(blob: bytes | str) -> tuple[TriangleMesh, dict]:
    """Parse mesh JSON back into a mesh and its ``source`` block."""
    doc = json.loads(blob)
    if doc.get("version") != MESH_FORMAT_VERSION:
        raise ValueError(f"unsupported mesh format version: {doc.get('version')!r}")
    mesh = TriangleMesh(
        vertices=np.array(doc["vertices"], dtype=np.float64).reshape(-1, 2),
        triangles=np.array(doc["triangles"], dtype=np.int64).reshape(-1, 3),
        hull_count=int(doc["hullCount"]),
    )
    return mesh, doc["source"]
