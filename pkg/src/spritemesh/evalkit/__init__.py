from spritemesh.evalkit.baselines import baseline_grid, baseline_hull, baseline_shi_tomasi
from spritemesh.evalkit.metrics import angle_ratio, boundary_adherence, mask_coverage
from spritemesh.evalkit.report import MeshReport, compare, evaluate_mesh

__all__ = [
    "MeshReport", "angle_ratio", "baseline_grid", "baseline_hull", "baseline_shi_tomasi",
    "boundary_adherence", "compare", "evaluate_mesh", "mask_coverage",
]
