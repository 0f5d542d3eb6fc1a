"""Per-mesh reports and prediction vs. ground-truth comparison."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.evalkit.metrics import angle_ratio, boundary_adherence, mask_coverage
from spritemesh.interior import detect_interior_edges
from spritemesh.meshgen.mesh import TriangleMesh
from spritemesh.raster import RasterImage

ADHERENCE_NOTE = (
    "boundaryAdherence uses this mesher's own masked Canny chains as the reference "
    "edge set, which favours edge-following methods"
)


def _r(x: float | None, nd: int = 6) -> float | None:
    return None if x is None else round(float(x), nd)


@dataclass
class MeshReport:
    sprite: str
    method: str
    boundary_adherence: float | None
    exterior: int
    interior: int
    triangles: int
    angle_ratio: float
    mask_coverage: float
    runtime_ms: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.exterior + self.interior

    def to_dict(self) -> dict:
        return {
            "sprite": self.sprite,
            "method": self.method,
            "boundaryAdherence": _r(self.boundary_adherence),
            "vertices": {"exterior": self.exterior, "interior": self.interior, "total": self.total},
            "triangles": self.triangles,
            "angleRatio": _r(self.angle_ratio),
            "maskCoverage": _r(self.mask_coverage),
            "runtimeMs": {k: round(float(v), 3) for k, v in self.runtime_ms.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MeshReport":
        return cls(
            sprite=d["sprite"],
            method=d["method"],
            boundary_adherence=d["boundaryAdherence"],
            exterior=d["vertices"]["exterior"],
            interior=d["vertices"]["interior"],
            triangles=d["triangles"],
            angle_ratio=d["angleRatio"],
            mask_coverage=d["maskCoverage"],
            runtime_ms=dict(d.get("runtimeMs", {})),
        )


def evaluate_mesh(
    mesh: TriangleMesh,
    rgb: RasterImage,
    mask: np.ndarray,
    cfg: PipelineConfig | None = None,
    *,
    sprite: str = "",
    method: str = "",
    edges: np.ndarray | None = None,
    runtime_ms: dict | None = None,
) -> MeshReport:
    cfg = cfg or PipelineConfig()
    if edges is None:
        edges = detect_interior_edges(rgb, mask, cfg)
    return MeshReport(
        sprite=sprite,
        method=method,
        boundary_adherence=boundary_adherence(mesh, rgb, mask, cfg, edges=edges),
        exterior=mesh.hull_count,
        interior=mesh.interior_count,
        triangles=len(mesh.triangles),
        angle_ratio=angle_ratio(mesh) if len(mesh.triangles) else 0.0,
        mask_coverage=mask_coverage(mesh, mask),
        runtime_ms=runtime_ms or {},
    )


def compare(
    pred: TriangleMesh,
    gt: TriangleMesh,
    rgb: RasterImage,
    mask: np.ndarray,
    cfg: PipelineConfig | None = None,
    *,
    sprite: str = "",
) -> dict:
    """Reports for both meshes plus prediction-minus-ground-truth deltas."""
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (rgb.height, rgb.width):
        raise ValueError("mask and image frames differ")
    h, w = mask.shape
    for name, mesh in (("pred", pred), ("gt", gt)):
        v = mesh.vertices
        if len(v) and (v.min() < -1 or v[:, 0].max() > w + 1 or v[:, 1].max() > h + 1):
            raise ValueError(f"{name} mesh does not fit the {w}x{h} image frame")
    cfg = cfg or PipelineConfig()
    edges = detect_interior_edges(rgb, mask, cfg)
    rp = evaluate_mesh(pred, rgb, mask, cfg, sprite=sprite, method="pred", edges=edges)
    rg = evaluate_mesh(gt, rgb, mask, cfg, sprite=sprite, method="gt", edges=edges)
    adh = None
    if rp.boundary_adherence is not None and rg.boundary_adherence is not None:
        adh = rp.boundary_adherence - rg.boundary_adherence
    return {
        "pred": rp.to_dict(),
        "gt": rg.to_dict(),
        "delta": {
            "exterior": rp.exterior - rg.exterior,
            "interior": rp.interior - rg.interior,
            "total": rp.total - rg.total,
            "triangles": rp.triangles - rg.triangles,
            "boundaryAdherence": _r(adh),
            "angleRatio": _r(rp.angle_ratio - rg.angle_ratio),
            "maskCoverage": _r(rp.mask_coverage - rg.mask_coverage),
        },
    }


def dumps_report(obj) -> str:
    """Deterministic JSON text for reports."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
