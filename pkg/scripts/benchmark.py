"""Per-stage wall-clock timings of the mesher across sprite sizes.

    python3 scripts/benchmark.py --sizes 256 512 1024 2048 --repeats 3
"""
from __future__ import annotations

import argparse
import statistics

import numpy as np

from spritemesh.corpus import CorpusSpec, generate_sprite
from spritemesh.imgproc import alpha_threshold
from spritemesh.meshgen import build_mesh_detailed


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024, 2048])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    stages = ("exterior", "interior", "triangulation", "total")
    print(f"{'size':>6}" + "".join(f"{s:>15}" for s in stages) + f"{'vertices':>10}")
    for size in args.sizes:
        img = generate_sprite(np.random.default_rng([args.seed, 0]), CorpusSpec(size=size))
        mask = alpha_threshold(img)
        runs = [build_mesh_detailed(img, mask) for _ in range(args.repeats)]
        totals = [dict(r.timings, total=sum(r.timings.values())) for r in runs]
        med = {s: statistics.median(t[s] for t in totals) for s in stages}
        print(f"{size:>6}" + "".join(f"{med[s]:>12.1f} ms" for s in stages)
              + f"{runs[0].mesh.vertex_count:>10}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
