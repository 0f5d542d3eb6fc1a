import json
import shutil
from pathlib import Path

import numpy as np
import pytest

from spritemesh.cli import aggregate, format_table, main
from spritemesh.meshgen.mesh import load_mesh_json
from spritemesh.raster import RasterImage, load_image, save_png

FIX = Path(__file__).parent / "fixtures"
SPRITE = FIX / "sprites" / "synthetic_0.png"


def _run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- mesh


def test_mesh_rgba(tmp_path, capsys):
    out = tmp_path / "s.mesh.json"
    code, stdout, _ = _run(capsys, "mesh", SPRITE, "--out", out)
    assert code == 0
    mesh, source = load_mesh_json(out.read_bytes())
    assert source == {"image": SPRITE.name, "width": 384, "height": 384}
    assert mesh.interior_count > 0
    for stage in ("exterior", "interior", "triangulation", "total"):
        assert stage in stdout
    assert " ms" in stdout


def test_mesh_rgb_needs_mask(tmp_path, capsys):
    rgb = tmp_path / "s.png"
    save_png(RasterImage(load_image(SPRITE).rgb), rgb)
    code, _, err = _run(capsys, "mesh", rgb, "--out", tmp_path / "o.json")
    assert code == 2
    assert "--mask" in err and "not bundled" in err


def test_mask_path_matches_alpha_path(tmp_path, capsys):
    img = load_image(SPRITE)
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    shutil.copy(SPRITE, tmp_path / "a" / "s.png")
    save_png(RasterImage(img.rgb), tmp_path / "b" / "s.png")
    save_png(RasterImage(np.repeat(img.alpha[..., None], 3, axis=2)), tmp_path / "b" / "mask.png")
    assert _run(capsys, "mesh", tmp_path / "a" / "s.png", "--out", tmp_path / "a.json")[0] == 0
    assert _run(capsys, "mesh", tmp_path / "b" / "s.png", "--mask", tmp_path / "b" / "mask.png",
                "--out", tmp_path / "b.json")[0] == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_mask_size_mismatch(tmp_path, capsys):
    save_png(RasterImage(np.zeros((10, 10, 3), np.uint8)), tmp_path / "m.png")
    code, _, err = _run(capsys, "mesh", SPRITE, "--mask", tmp_path / "m.png", "--out", tmp_path / "o.json")
    assert code == 2 and "mask is 10x10" in err


def test_mesh_batch_partial_failure(tmp_path, capsys):
    src = tmp_path / "in"
    src.mkdir()
    shutil.copy(FIX / "sprites" / "synthetic_1.png", src / "a.png")
    shutil.copy(FIX / "sprites" / "synthetic_2.png", src / "b.png")
    (src / "c.png").write_bytes(SPRITE.read_bytes()[:300])
    code, _, err = _run(capsys, "mesh", src, "--out-dir", tmp_path / "out")
    assert code == 1
    assert "2 of 3 meshed, 1 failed: c.png" in err
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["a.mesh.json", "b.mesh.json"]


def test_no_interior_flag(tmp_path, capsys):
    out = tmp_path / "o.json"
    assert _run(capsys, "mesh", SPRITE, "--no-interior", "--out", out)[0] == 0
    assert load_mesh_json(out.read_bytes())[0].interior_count == 0


def test_missing_input(tmp_path, capsys):
    code, _, err = _run(capsys, "mesh", tmp_path / "nope.png")
    assert code == 2 and "no such file" in err


# ---------------------------------------------------------------- config


def test_config_precedence(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("n_target = 20\n")

    def hull(*extra):
        out = tmp_path / "o.json"
        assert _run(capsys, "mesh", SPRITE, "--no-interior", "--out", out, *extra)[0] == 0
        return load_mesh_json(out.read_bytes())[0].hull_count

    default = hull()
    from_file = hull("--config", cfg)
    assert from_file < default
    assert hull("--config", cfg, "--set", "n_target=50") == default
    monkeypatch.setenv("SPRITEMESH_CONFIG", str(cfg))
    assert hull() == from_file


@pytest.mark.parametrize("bad", [["--set", "n_target=abc"], ["--set", "bogus=1"], ["--set", "canny_low=500"],
                                 ["--set", "nokey"], ["--config", "/nonexistent.cfg"]])
def test_invalid_config_exit_2(tmp_path, capsys, bad):
    code, _, err = _run(capsys, "mesh", SPRITE, "--out", tmp_path / "o.json", *bad)
    assert code == 2 and "config" in err
    assert not (tmp_path / "o.json").exists()


# ---------------------------------------------------------------- spine commands


def test_skel2json_golden(tmp_path, capsys):
    code, _, _ = _run(capsys, "skel2json", FIX / "skel" / "meshes.skel", "--out-dir", tmp_path)
    assert code == 0
    assert (tmp_path / "meshes.json").read_bytes() == (FIX / "skel" / "meshes.json").read_bytes()


def test_skel2json_batch_with_corrupt(tmp_path, capsys):
    src = tmp_path / "in"
    src.mkdir()
    for name in ("minimal", "bones"):
        shutil.copy(FIX / "skel" / f"{name}.skel", src)
    shutil.copy(FIX / "skel" / "truncated.skel", src)
    code, _, err = _run(capsys, "skel2json", src, "--out-dir", tmp_path / "out")
    assert code == 1
    assert "section skins" in err and "offset" in err and "truncated.skel" in err
    assert sorted(p.name for p in (tmp_path / "out").iterdir()) == ["bones.json", "minimal.json"]


def test_atlas_extract(tmp_path, capsys):
    code, stdout, _ = _run(capsys, "atlas-extract", FIX / "atlas" / "modern.atlas",
                           "--skel", FIX / "atlas" / "gt.skel", "--out-dir", tmp_path)
    assert code == 0
    assert "3 regions, 2 ground-truth meshes" in stdout
    sizes = {p.stem: load_image(p).data.shape[:2] for p in tmp_path.glob("*.png")}
    assert sizes == {"card": (50, 100), "flag": (45, 66), "gem": (32, 40)}
    mesh, source = load_mesh_json((tmp_path / "card.gt.json").read_bytes())
    assert mesh.vertices.tolist() == [[0, 0], [100, 0], [100, 50], [0, 50]]
    assert source["image"] == "card.png"


def test_atlas_extract_bad_atlas(tmp_path, capsys):
    bad = tmp_path / "bad.atlas"
    bad.write_text("sheet.png\nsize: 4, 4\nr\n  bounds: 1, x\n")
    code, _, err = _run(capsys, "atlas-extract", bad, "--out-dir", tmp_path / "o")
    assert code == 1 and "line 4" in err


# ---------------------------------------------------------------- eval / overlay / corpus


def test_eval_baselines(tmp_path, capsys):
    src = tmp_path / "in"
    src.mkdir()
    shutil.copy(SPRITE, src)
    report = tmp_path / "r.json"
    code, stdout, _ = _run(capsys, "eval", "--baselines", src, "--report", report)
    assert code == 0
    for method in ("ours", "shi-tomasi", "grid", "hull"):
        assert method in stdout
    doc = json.loads(report.read_text())
    assert [r["method"] for r in doc["reports"]] == ["ours", "shi-tomasi", "grid", "hull"]
    assert all(r["runtimeMs"] == {} for r in doc["reports"])
    assert doc["aggregate"]["hull"]["boundaryAdherence"]["mean"] == 0


def test_eval_empty_dir(tmp_path, capsys):
    code, _, err = _run(capsys, "eval", "--baselines", tmp_path)
    assert code == 2 and "no sprites found" in err


def test_eval_pred_vs_gt(tmp_path, capsys):
    pred, gt = tmp_path / "p.json", tmp_path / "g.json"
    _run(capsys, "mesh", SPRITE, "--out", pred)
    _run(capsys, "mesh", SPRITE, "--no-interior", "--out", gt)
    code, stdout, _ = _run(capsys, "eval", "--pred", pred, "--gt", gt, "--image", SPRITE,
                           "--report", tmp_path / "d.json")
    assert code == 0 and "interior delta +" in stdout
    doc = json.loads((tmp_path / "d.json").read_text())
    assert doc["delta"]["interior"] == doc["pred"]["vertices"]["interior"] > 0


def test_aggregate_and_table():
    rows = [{"method": "ours", "boundaryAdherence": a, "vertices": {"total": 10}, "triangles": 8,
             "angleRatio": 0.5, "maskCoverage": 1.0} for a in (0.4, 0.8)]
    agg = aggregate(rows)
    assert agg["ours"]["boundaryAdherence"] == {"mean": 0.6, "std": 0.2, "n": 2}
    assert "ours" in format_table(agg) and "±" in format_table(agg)


def test_overlay_cmd(tmp_path, capsys):
    mesh = tmp_path / "m.json"
    _run(capsys, "mesh", SPRITE, "--out", mesh)
    n = len(load_mesh_json(mesh.read_bytes())[0].triangles)
    code, stdout, _ = _run(capsys, "overlay", SPRITE, mesh, "--out", tmp_path / "w.svg")
    assert code == 0 and stdout.startswith(f"{n} triangles")
    assert (tmp_path / "w.svg").read_text().count("<polygon") == n
    code, _, err = _run(capsys, "overlay", FIX / "sprites" / "card.png", mesh, "--out", tmp_path / "w.png")
    assert code == 1 and "frame" in err


def test_gen_corpus(tmp_path, capsys):
    code, _, _ = _run(capsys, "gen-corpus", "--count", 3, "--size", 128, "--seed", 5, "--out-dir", tmp_path / "a")
    assert code == 0
    files = sorted((tmp_path / "a").iterdir())
    assert [p.name for p in files] == ["sprite_000.png", "sprite_001.png", "sprite_002.png"]
    assert load_image(files[0]).data.shape == (128, 128, 4)
    _run(capsys, "gen-corpus", "--count", 3, "--size", 128, "--seed", 6, "--out-dir", tmp_path / "b")
    assert files[0].read_bytes() != (tmp_path / "b" / "sprite_000.png").read_bytes()
    assert _run(capsys, "gen-corpus", "--count", 0)[0] == 2
