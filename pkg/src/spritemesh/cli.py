"""Command-line interface.

    spritemesh mesh sprite.png --out sprite.mesh.json
    spritemesh mesh photo.jpg --mask photo_mask.png
    spritemesh skel2json hero.skel --out-dir json/
    spritemesh atlas-extract hero.atlas --skel hero.skel --out-dir crops/
    spritemesh eval --baselines corpus/ --report report.json
    spritemesh eval --pred a.mesh.json --gt a.gt.json --image a.png
    spritemesh overlay sprite.png sprite.mesh.json --out wire.svg
    spritemesh gen-corpus --count 20 --seed 0 --out-dir corpus/

Pipeline settings come from defaults, then the file named by ``--config``
(or ``$SPRITEMESH_CONFIG``), then ``--set key=value`` flags.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from spritemesh.config import PipelineConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg", ".bmp", ".webp", ".tga", ".gif", ".tif", ".tiff"}
NO_MASK_MESSAGE = (
    "{name}: image has no meaningful alpha channel; pass --mask <grayscale.png>. "
    "The segmentation network that would predict a mask for opaque images is not bundled."
)


class UsageError(Exception):
    """Bad invocation or input; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    inputs: list[Path] = field(default_factory=list)
    out: Path | None = None
    out_dir: Path | None = None
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    jobs: int = 1
    seed: int = 0
    options: dict = field(default_factory=dict)


def _pipeline_config(args) -> PipelineConfig:
    cfg = PipelineConfig()
    path = args.config or os.environ.get("SPRITEMESH_CONFIG")
    try:
        if path:
            cfg = PipelineConfig.from_file(path, cfg)
        overrides = {}
        for item in args.set or []:
            if "=" not in item:
                raise ValueError(f"--set expects key=value, got {item!r}")
            k, v = item.split("=", 1)
            overrides[k.strip()] = v.strip()
        return PipelineConfig.from_mapping(overrides, cfg)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"invalid config: {exc}") from None


def _map(fn, items: list, jobs: int) -> list:
    """Ordered map over a bounded worker pool; ``jobs <= 1`` runs inline."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))


def _collect_images(paths: list[Path]) -> list[Path]:
    out = []
    for p in paths:
        if p.is_dir():
            out.extend(sorted(q for q in p.iterdir() if q.suffix.lower() in IMAGE_SUFFIXES))
        elif p.exists():
            out.append(p)
        else:
            raise UsageError(f"{p}: no such file or directory")
    return out


def _load_sprite(path: Path, mask_path: Path | None, cfg: PipelineConfig):
    """(rgb image, boolean mask).  Raises UsageError when no usable mask exists."""
    from spritemesh.imgproc.filters import alpha_threshold
    from spritemesh.raster import has_meaningful_alpha, load_image, to_grayscale

    img = load_image(path)
    if mask_path is not None:
        m = load_image(mask_path)
        if (m.width, m.height) != (img.width, img.height):
            raise UsageError(f"{mask_path}: mask is {m.width}x{m.height}, image is {img.width}x{img.height}")
        gray = m.alpha if m.channels == 4 and not m.rgb.any() else to_grayscale(m)
        return img, gray > cfg.tau_alpha
    if img.channels != 4 or not has_meaningful_alpha(img, cfg.tau_alpha):
        raise UsageError(NO_MASK_MESSAGE.format(name=path.name))
    return img, alpha_threshold(img, cfg.tau_alpha)


# ------------------------------------------------------------------ mesh


def _mesh_one(task):
    path, mask_path, out, cfg, interior = task
    from spritemesh.meshgen.mesh import build_mesh_detailed, export_mesh_json

    try:
        img, mask = _load_sprite(path, mask_path, cfg)
        t0 = time.perf_counter()
        build = build_mesh_detailed(img, mask, cfg, interior=interior)
        total = (time.perf_counter() - t0) * 1000
        blob = export_mesh_json(build.mesh, {"image": path.name, "width": img.width, "height": img.height})
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_bytes(blob)
    except UsageError as exc:
        return path, EXIT_USAGE, str(exc)
    except (ValueError, OSError) as exc:
        return path, EXIT_FAIL, f"{path.name}: {exc}"
    m = build.mesh
    stages = ", ".join(f"{k} {v:.1f} ms" for k, v in build.timings.items())
    return path, EXIT_OK, (
        f"{path.name}: {stages}, total {total:.1f} ms; {m.vertex_count} vertices "
        f"({m.hull_count} exterior, {m.interior_count} interior), {len(m.triangles)} triangles -> {out}"
    )


def cmd_mesh(rc: RunConfig) -> int:
    images = _collect_images(rc.inputs)
    if not images:
        raise UsageError("no sprites found")
    mask = rc.options.get("mask")
    if mask is not None and len(images) != 1:
        raise UsageError("--mask applies to a single input image")
    if rc.out is not None and len(images) != 1:
        raise UsageError("--out applies to a single input image; use --out-dir")
    tasks = []
    for p in images:
        out = rc.out or (rc.out_dir or p.parent) / f"{p.stem}.mesh.json"
        tasks.append((p, mask, out, rc.pipeline, rc.options.get("interior", True)))
    results = _map(_mesh_one, tasks, rc.jobs)
    return _report_batch(results, "meshed")


def _report_batch(results, verb: str) -> int:
    failed = [(p, code, msg) for p, code, msg in results if code != EXIT_OK]
    for _, code, msg in results:
        print(msg, file=sys.stderr if code != EXIT_OK else sys.stdout)
    if len(results) == 1:
        return results[0][1]
    if failed:
        print(f"{len(results) - len(failed)} of {len(results)} {verb}, {len(failed)} failed: "
              + ", ".join(p.name for p, _, _ in failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ------------------------------------------------------------------ spine


def _skel_one(task):
    path, out_dir = task
    from spritemesh.spine.reader import SkelFormatError
    from spritemesh.spine.skel import convert_file_bytes

    try:
        blob = convert_file_bytes(path.read_bytes(), path.suffix)
        out = out_dir / f"{path.stem}.json"
        if out.resolve() == path.resolve():
            raise UsageError(f"{path.name}: output would overwrite the input")
        out_dir.mkdir(parents=True, exist_ok=True)
        out.write_bytes(blob)
    except SkelFormatError as exc:
        return path, EXIT_FAIL, f"{path}: {exc}"
    except UsageError as exc:
        return path, EXIT_USAGE, str(exc)
    except OSError as exc:
        return path, EXIT_FAIL, f"{path}: {exc}"
    return path, EXIT_OK, f"{path.name} -> {out}"


def cmd_skel2json(rc: RunConfig) -> int:
    files = []
    for p in rc.inputs:
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir() if q.suffix.lower() in (".skel", ".json")))
        else:
            files.append(p)
    if not files:
        raise UsageError("no skeleton files found")
    out_dir = rc.out_dir or Path(".")
    return _report_batch(_map(_skel_one, [(f, out_dir) for f in files], rc.jobs), "converted")


def _atlas_one(task):
    atlas_path, skel_path, out_dir = task
    from spritemesh.meshgen.mesh import export_mesh_json
    from spritemesh.raster import load_image, save_png
    from spritemesh.spine.atlas import AtlasFormatError, crop_region, parse_atlas
    from spritemesh.spine.gt import extract_gt_mesh
    from spritemesh.spine.reader import SkelFormatError
    from spritemesh.spine.skel import parse_skel, skel_from_json

    try:
        idx = parse_atlas(atlas_path.read_text(encoding="utf-8"))
        sheets = [load_image(atlas_path.parent / page.image_file) for page in idx.pages]
        out_dir.mkdir(parents=True, exist_ok=True)
        crops = {}
        for region in idx.regions:
            crop = crop_region(sheets[region.page], region)
            suffix = f"_{region.index}" if region.index >= 0 else ""
            name = f"{region.name}{suffix}".replace("/", "__")
            out = out_dir / f"{name}.png"
            save_png(crop, out)
            crops.setdefault(region.name, (region, crop, out))
        n_gt = 0
        if skel_path is not None:
            data = skel_path.read_bytes()
            doc = skel_from_json(data) if skel_path.suffix.lower() == ".json" else parse_skel(data)
            for skin, _slot, key, att in doc.mesh_attachments():
                region_name = att.path or att.name
                if region_name not in crops:
                    continue
                region, crop, png = crops[region_name]
                mesh = extract_gt_mesh(att, region, crop)
                stem = key.replace("/", "__") if skin.name == "default" else f"{skin.name}__{key.replace('/', '__')}"
                src = {"image": png.name, "width": crop.width, "height": crop.height}
                (out_dir / f"{stem}.gt.json").write_bytes(export_mesh_json(mesh, src))
                n_gt += 1
    except (AtlasFormatError, SkelFormatError, ValueError, OSError) as exc:
        return atlas_path, EXIT_FAIL, f"{atlas_path}: {exc}"
    return atlas_path, EXIT_OK, f"{atlas_path.name}: {len(idx.regions)} regions, {n_gt} ground-truth meshes -> {out_dir}"


def cmd_atlas_extract(rc: RunConfig) -> int:
    skel = rc.options.get("skel")
    if skel is not None and len(rc.inputs) != 1:
        raise UsageError("--skel applies to a single atlas")
    out_dir = rc.out_dir or Path(".")
    tasks = [(p, skel, out_dir) for p in rc.inputs]
    return _report_batch(_map(_atlas_one, tasks, rc.jobs), "extracted")


# ------------------------------------------------------------------ eval

METHODS = ("ours", "shi-tomasi", "grid", "hull")


def _eval_one(task):
    path, cfg, timings = task
    from spritemesh.evalkit.baselines import baseline_grid, baseline_hull, baseline_shi_tomasi
    from spritemesh.evalkit.report import evaluate_mesh
    from spritemesh.meshgen.mesh import build_mesh_detailed

    try:
        img, mask = _load_sprite(path, None, cfg)
        build = build_mesh_detailed(img, mask, cfg)
        reports = []
        for method in METHODS:
            t0 = time.perf_counter()
            if method == "ours":
                mesh, runtime = build.mesh, dict(build.timings)
            else:
                if method == "shi-tomasi":
                    mesh = baseline_shi_tomasi(img, mask, cfg)
                elif method == "grid":
                    mesh = baseline_grid(mask, cfg)
                else:
                    mesh = baseline_hull(mask, cfg)
                runtime = {"total": (time.perf_counter() - t0) * 1000}
            rep = evaluate_mesh(mesh, img, mask, cfg, sprite=path.name, method=method, edges=build.edges,
                                runtime_ms=runtime if timings else {})
            reports.append(rep.to_dict())
        return path, EXIT_OK, reports
    except UsageError as exc:
        return path, EXIT_USAGE, str(exc)
    except (ValueError, OSError) as exc:
        return path, EXIT_FAIL, f"{path.name}: {exc}"


def aggregate(reports: list[dict]) -> dict:
    """Mean and population std per method, in ``METHODS`` order."""
    out = {}
    for method in METHODS:
        rows = [r for r in reports if r["method"] == method]
        if not rows:
            continue
        stats = {"sprites": len(rows)}
        for key, get in (
            ("boundaryAdherence", lambda r: r["boundaryAdherence"]),
            ("vertices", lambda r: r["vertices"]["total"]),
            ("triangles", lambda r: r["triangles"]),
            ("angleRatio", lambda r: r["angleRatio"]),
            ("maskCoverage", lambda r: r["maskCoverage"]),
        ):
            vals = np.array([get(r) for r in rows if get(r) is not None], dtype=np.float64)
            stats[key] = (
                {"mean": round(float(vals.mean()), 6), "std": round(float(vals.std()), 6), "n": int(len(vals))}
                if len(vals) else None
            )
        out[method] = stats
    return out


def format_table(agg: dict) -> str:
    cols = ("boundaryAdherence", "vertices", "triangles", "angleRatio", "maskCoverage")
    lines = [f"{'method':<12}" + "".join(f"{c:>22}" for c in cols)]
    for method, stats in agg.items():
        cells = []
        for c in cols:
            s = stats[c]
            cells.append(f"{'n/a':>22}" if s is None else f"{s['mean']:>12.4f} ± {s['std']:<7.4f}")
        lines.append((f"{method:<12}" + "".join(cells)).rstrip())
    return "\n".join(lines)


def cmd_eval(rc: RunConfig) -> int:
    from spritemesh.evalkit.report import ADHERENCE_NOTE, compare, dumps_report, evaluate_mesh
    from spritemesh.meshgen.mesh import load_mesh_json

    opts = rc.options
    report_path = rc.out
    if opts.get("baselines"):
        images = _collect_images(rc.inputs)
        if not images:
            raise UsageError("no sprites found")
        tasks = [(p, rc.pipeline, opts.get("timings", False)) for p in images]
        results = _map(_eval_one, tasks, rc.jobs)
        reports, failed = [], []
        for path, code, payload in results:
            if code == EXIT_OK:
                reports.extend(payload)
            else:
                failed.append((path, code, payload))
                print(payload, file=sys.stderr)
        agg = aggregate(reports)
        print(f"# {ADHERENCE_NOTE}")
        print(format_table(agg))
        if report_path:
            doc = {"note": ADHERENCE_NOTE, "reports": reports, "aggregate": agg}
            report_path.parent.mkdir(parents=True, exist_ok=True)
            report_path.write_text(dumps_report(doc), encoding="utf-8")
        if failed:
            print(f"{len(images) - len(failed)} of {len(images)} evaluated, {len(failed)} failed", file=sys.stderr)
            return EXIT_USAGE if len(failed) == len(images) and all(c == EXIT_USAGE for _, c, _ in failed) \
                else EXIT_FAIL
        return EXIT_OK

    pred_path, image = opts.get("pred"), opts.get("image")
    if pred_path is None or image is None:
        raise UsageError("eval needs --baselines with sprite inputs, or --pred and --image")
    try:
        img, mask = _load_sprite(image, opts.get("mask"), rc.pipeline)
        pred, _ = load_mesh_json(pred_path.read_bytes())
        if opts.get("gt") is not None:
            gt, _ = load_mesh_json(opts["gt"].read_bytes())
            doc = compare(pred, gt, img, mask, rc.pipeline, sprite=image.name)
            d = doc["delta"]
            print(f"{image.name}: interior delta {d['interior']:+d}, total delta {d['total']:+d}, "
                  f"adherence delta {d['boundaryAdherence']}")
        else:
            doc = evaluate_mesh(pred, img, mask, rc.pipeline, sprite=image.name, method="pred").to_dict()
            print(f"{image.name}: adherence {doc['boundaryAdherence']}, coverage {doc['maskCoverage']}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    doc = {"note": ADHERENCE_NOTE, **doc}
    if report_path:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        report_path.write_text(dumps_report(doc), encoding="utf-8")
    return EXIT_OK


# ------------------------------------------------------------------ overlay / corpus


def cmd_overlay(rc: RunConfig) -> int:
    from spritemesh.meshgen.mesh import load_mesh_json
    from spritemesh.overlay import render_png, render_svg
    from spritemesh.raster import load_image

    if len(rc.inputs) != 2 or rc.out is None:
        raise UsageError("overlay needs SPRITE MESH and --out")
    sprite_path, mesh_path = rc.inputs
    try:
        sprite = load_image(sprite_path)
        mesh, source = load_mesh_json(mesh_path.read_bytes())
        render = render_svg if rc.out.suffix.lower() == ".svg" else render_png
        blob = render(sprite, mesh, source)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rc.out.parent.mkdir(parents=True, exist_ok=True)
    rc.out.write_bytes(blob)
    print(f"{len(mesh.triangles)} triangles -> {rc.out}")
    return EXIT_OK


def _corpus_one(task):
    i, seed, spec, out_dir = task
    from spritemesh.corpus import generate_sprite
    from spritemesh.raster import save_png

    # one independent stream per sprite so parallel runs match serial ones
    rng = np.random.default_rng([seed, i])
    out = out_dir / f"sprite_{i:03d}.png"
    save_png(generate_sprite(rng, spec), out)
    return out, EXIT_OK, f"-> {out}"


def cmd_gen_corpus(rc: RunConfig) -> int:
    from spritemesh.corpus import CorpusSpec

    count = rc.options.get("count", 20)
    if count < 1:
        raise UsageError("--count must be >= 1")
    spec = CorpusSpec(size=rc.options.get("size", CorpusSpec.size))
    out_dir = rc.out_dir or Path("corpus")
    out_dir.mkdir(parents=True, exist_ok=True)
    results = _map(_corpus_one, [(i, rc.seed, spec, out_dir) for i in range(count)], rc.jobs)
    print(f"{len(results)} sprites (seed {rc.seed}) -> {out_dir}")
    return EXIT_OK


COMMANDS = {
    "mesh": cmd_mesh,
    "skel2json": cmd_skel2json,
    "atlas-extract": cmd_atlas_extract,
    "eval": cmd_eval,
    "overlay": cmd_overlay,
    "gen-corpus": cmd_gen_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value pipeline config file (default: $SPRITEMESH_CONFIG)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config field")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for batches (0 = all cores)")
    common.add_argument("--seed", type=int, default=0, help="seed for synthetic data")

    ap = argparse.ArgumentParser(prog="spritemesh", description="Contour-aware sprite meshing toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh", parents=[common], help="mesh sprite images")
    p.add_argument("inputs", nargs="+", type=Path)
    p.add_argument("--mask", type=Path, help="grayscale mask for images without alpha")
    p.add_argument("--out", type=Path)
    p.add_argument("--out-dir", type=Path)
    p.add_argument("--no-interior", action="store_true", help="exterior vertices only")

    p = sub.add_parser("skel2json", parents=[common], help="convert binary skeletons to JSON")
    p.add_argument("inputs", nargs="+", type=Path)
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("atlas-extract", parents=[common], help="crop atlas regions and ground-truth meshes")
    p.add_argument("inputs", nargs="+", type=Path)
    p.add_argument("--skel", type=Path, help="skeleton whose mesh attachments become ground truth")
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("eval", parents=[common], help="mesh quality reports")
    p.add_argument("inputs", nargs="*", type=Path)
    p.add_argument("--baselines", action="store_true", help="compare against hull, grid and Shi-Tomasi")
    p.add_argument("--pred", type=Path)
    p.add_argument("--gt", type=Path)
    p.add_argument("--image", type=Path)
    p.add_argument("--mask", type=Path)
    p.add_argument("--report", type=Path, help="write the JSON report here")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")

    p = sub.add_parser("overlay", parents=[common], help="draw a mesh over its sprite")
    p.add_argument("inputs", nargs=2, type=Path, metavar="PATH", help="sprite image, then mesh JSON")
    p.add_argument("--out", type=Path, required=True, help=".png or .svg")

    p = sub.add_parser("gen-corpus", parents=[common], help="write seeded synthetic sprites")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--size", type=int, default=1024)
    p.add_argument("--out-dir", type=Path)
    return ap


def run_config_from_args(args) -> RunConfig:
    rc = RunConfig(command=args.command, pipeline=_pipeline_config(args), seed=args.seed,
                   jobs=args.jobs if args.jobs > 0 else (os.cpu_count() or 1))
    rc.inputs = list(getattr(args, "inputs", []) or [])
    rc.out = getattr(args, "out", None) or getattr(args, "report", None)
    rc.out_dir = getattr(args, "out_dir", None)
    for key in ("mask", "skel", "baselines", "pred", "gt", "image", "timings", "count", "size"):
        if getattr(args, key, None) is not None:
            rc.options[key] = getattr(args, key)
    if args.command == "mesh":
        rc.options["interior"] = not args.no_interior
    return rc


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = run_config_from_args(args)
        return COMMANDS[rc.command](rc)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
