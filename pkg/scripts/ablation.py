"""Switch off one pipeline component at a time and measure the effect.

    python3 scripts/ablation.py --count 10 --size 1024
"""
from __future__ import annotations

import argparse

import numpy as np

from spritemesh.config import PipelineConfig
from spritemesh.corpus import CorpusSpec, generate_sprite
from spritemesh.evalkit import angle_ratio, boundary_adherence, mask_coverage
from spritemesh.imgproc import alpha_threshold
from spritemesh.meshgen import build_mesh_detailed

VARIANTS = {
    "full": {},
    "no bilateral": {"use_bilateral": False},
    "luminance only": {"multi_channel": False},
    "no DP": {"use_dp": False},
    "no subdivision": {"use_subdivision": False},
}


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--size", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    spec = CorpusSpec(size=args.size)
    sprites = []
    for i in range(args.count):
        img = generate_sprite(np.random.default_rng([args.seed, i]), spec)
        sprites.append((img, alpha_threshold(img)))

    full_cfg = PipelineConfig()
    # adherence is always scored against the full pipeline's reference edges
    reference = [build_mesh_detailed(img, mask, full_cfg).edges for img, mask in sprites]

    print(f"{'variant':<16}{'adherence':>11}{'vertices':>10}{'exterior':>10}{'angle':>8}{'coverage':>10}{'ms':>9}")
    for name, overrides in VARIANTS.items():
        cfg = full_cfg.replace(**overrides)
        rows = []
        for (img, mask), edges in zip(sprites, reference):
            b = build_mesh_detailed(img, mask, cfg)
            m = b.mesh
            adh = boundary_adherence(m, img, mask, full_cfg, edges=edges)
            rows.append((np.nan if adh is None else adh, m.vertex_count, m.hull_count, angle_ratio(m),
                         mask_coverage(m, mask), sum(b.timings.values())))
        r = np.nanmean(np.array(rows, dtype=float), axis=0)
        print(f"{name:<16}{r[0]:>11.3f}{r[1]:>10.1f}{r[2]:>10.1f}{r[3]:>8.3f}{r[4]:>10.4f}{r[5]:>9.0f}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
