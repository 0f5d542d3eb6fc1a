"""Boundary adherence and mesh statistics for our mesher and the three baselines.

    python3 scripts/compare_baselines.py --count 20 --size 1024 --report baselines.json
"""
from __future__ import annotations

import argparse
import json
import time

import numpy as np

from spritemesh.cli import aggregate, format_table
from spritemesh.config import PipelineConfig
from spritemesh.corpus import CorpusSpec, generate_sprite
from spritemesh.evalkit import baseline_grid, baseline_hull, baseline_shi_tomasi, evaluate_mesh
from spritemesh.evalkit.report import ADHERENCE_NOTE
from spritemesh.imgproc import alpha_threshold
from spritemesh.meshgen import build_mesh_detailed


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--report", help="write per-sprite reports and the aggregate as JSON")
    args = ap.parse_args(argv)

    cfg = PipelineConfig()
    spec = CorpusSpec(size=args.size)
    reports = []
    for i in range(args.count):
        img = generate_sprite(np.random.default_rng([args.seed, i]), spec)
        mask = alpha_threshold(img, cfg.tau_alpha)
        build = build_mesh_detailed(img, mask, cfg)
        meshes = {"ours": (build.mesh, sum(build.timings.values()))}
        for name, fn in (("shi-tomasi", lambda: baseline_shi_tomasi(img, mask, cfg)),
                         ("grid", lambda: baseline_grid(mask, cfg)),
                         ("hull", lambda: baseline_hull(mask, cfg))):
            t0 = time.perf_counter()
            mesh = fn()
            meshes[name] = (mesh, (time.perf_counter() - t0) * 1000)
        for method, (mesh, ms) in meshes.items():
            rep = evaluate_mesh(mesh, img, mask, cfg, sprite=f"sprite_{i:03d}", method=method,
                                edges=build.edges, runtime_ms={"total": round(ms, 1)})
            reports.append(rep.to_dict())
        print(f"sprite {i + 1}/{args.count} done", flush=True)

    agg = aggregate(reports)
    print(f"# {ADHERENCE_NOTE}")
    print(format_table(agg))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump({"reports": reports, "aggregate": agg}, fh, indent=2)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
