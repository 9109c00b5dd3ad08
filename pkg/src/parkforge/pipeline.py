"""Stage orchestration shared by the CLI.

Each stage persists its artifacts under an output directory; the full
pipeline is the stages run back to back, so staged and monolithic runs
produce byte-identical files.  manifest.json indexes every artifact with
a SHA-256 content hash.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .builders import build_terrain_fields
from .config import PipelineConfig
from .errors import PipelineIOError
from .estimators import OverlayAnalyzer, PaletteSegmenter, PlanPreprocessor, SceneBuilder, SceneVectorizer
from .export import export_scene
from .palette import CATEGORIES
from .raster import load_plan, save_plan_png
from .render import render_overlay
from .segmentation import load_mask, mask_filename, save_mask
from .vectorscene import load_scene_json, save_scene_json

OVERLAY_KINDS = ("elevation", "slope", "drainage")


def _ensure_dir(out_dir) -> Path:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineIOError(f"cannot create output directory {out_dir}: {exc}") from exc
    return out_dir


def run_segment(plan_path, cfg: PipelineConfig, out_dir) -> list[Path]:
    """load -> smooth -> enhance -> segment; writes preprocessed.png + 8 masks."""
    out_dir = _ensure_dir(out_dir)
    plan = load_plan(plan_path, scale=cfg.io.scale_m_per_px)
    pre = PlanPreprocessor(
        lam=cfg.preprocessing.lam,
        sharpen_amount=cfg.preprocessing.sharpen_amount,
        contrast_gain=cfg.preprocessing.contrast_gain,
    ).fit_transform(plan)
    files = [save_plan_png(pre, out_dir / "preprocessed.png")]
    masks = PaletteSegmenter(palette=cfg.palette).fit_transform(pre)
    for mask in masks:
        files.append(save_mask(mask, out_dir / mask_filename(mask.category)))
    return files


def run_vectorize(masks_dir, cfg: PipelineConfig, out_dir) -> list[Path]:
    """Read the 8 category masks and write scene.json."""
    masks_dir = Path(masks_dir)
    out_dir = _ensure_dir(out_dir)
    masks = []
    for category in CATEGORIES:
        path = masks_dir / mask_filename(category)
        if not path.exists():
            raise PipelineIOError(f"missing mask file for category {category!r}: {path}")
        masks.append(load_mask(path, category))
    vectorizer = SceneVectorizer(
        min_area=cfg.extraction.min_area,
        epsilon=cfg.extraction.epsilon,
        sample_step=cfg.extraction.sample_step,
        blur_sigma=cfg.extraction.blur_sigma,
        prune_len=cfg.extraction.prune_len,
        stride=cfg.extraction.stride,
        planting_interval=cfg.extraction.planting_interval,
        scale=cfg.io.scale_m_per_px,
    )
    scene = vectorizer.fit_transform(masks)
    return [save_scene_json(scene, out_dir / "scene.json")]


def _scene_builder(cfg: PipelineConfig) -> SceneBuilder:
    b = cfg.build
    return SceneBuilder(
        seed=b.seed,
        building_height_range=b.building_height_range,
        road_width=b.road_width,
        city_road_width=b.city_road_width,
        terrain_amplitude=b.terrain_amplitude,
        terrain_exponent=b.terrain_exponent,
        terrain_jitter=b.terrain_jitter,
        tree_density=b.tree_density,
        canopy_height_range=b.canopy_height_range,
        drape=b.drape,
    )


def run_build(scene_json, cfg: PipelineConfig, out_dir) -> list[Path]:
    """Validate scene.json, build all meshes, write glTF + OBJ."""
    out_dir = _ensure_dir(out_dir)
    scene = load_scene_json(scene_json)
    scene3d = _scene_builder(cfg).fit_transform(scene)
    return export_scene(scene3d, out_dir, stem="scene")


def run_analyze(scene_dir, cfg: PipelineConfig, out_dir) -> list[Path]:
    """Recompute terrain from the persisted scene (same seed) and render overlays."""
    scene_dir = Path(scene_dir)
    out_dir = _ensure_dir(out_dir)
    scene_json = scene_dir / "scene.json"
    if not scene_json.exists():
        raise PipelineIOError(
            f"missing scene artifacts in {scene_dir}: expected {scene_json}"
        )
    scene = load_scene_json(scene_json)
    fields = build_terrain_fields(scene, cfg.build)

    world_w = scene.width * scene.scale
    world_h = scene.height * scene.scale
    fallback = (0.0, -world_h, world_w, 0.0)
    from .builders import Scene3D  # local import to avoid a cycle at module load

    overlays = OverlayAnalyzer(fallback_bounds=fallback).fit_transform(
        Scene3D(meshes=[f.mesh for f in fields], terrain_fields=fields)
    )
    files = []
    for kind in OVERLAY_KINDS:
        png, sidecar = render_overlay(
            overlays[kind], out_dir / f"analysis_{kind}.png", cfg.analysis.px_per_meter
        )
        files += [png, sidecar]
    return files


def sha256_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def run_pipeline(plan_path, cfg: PipelineConfig, out_dir) -> list[Path]:
    """All stages in order, then a manifest of every artifact hash."""
    out_dir = _ensure_dir(out_dir)
    files = run_segment(plan_path, cfg, out_dir)
    files += run_vectorize(out_dir, cfg, out_dir)
    files += run_build(out_dir / "scene.json", cfg, out_dir)
    files += run_analyze(out_dir, cfg, out_dir)
    manifest = {
        "seed": int(cfg.build.seed),
        "artifacts": {
            str(p.relative_to(out_dir)): sha256_file(p) for p in sorted(files)
        },
    }
    manifest_path = out_dir / "manifest.json"
    try:
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise PipelineIOError(f"cannot write {manifest_path}: {exc}") from exc
    return files + [manifest_path]
