from spritemesh.meshgen.delaunay import delaunay
from spritemesh.meshgen.mesh import (
    TriangleMesh,
    VertexSet,
    build_mesh,
    build_mesh_detailed,
    export_mesh_json,
    filter_by_centroid,
    load_mesh_json,
    merge_vertices,
)

__all__ = [
    "TriangleMesh", "VertexSet", "build_mesh", "build_mesh_detailed", "delaunay",
    "export_mesh_json", "filter_by_centroid", "load_mesh_json", "merge_vertices",
]
