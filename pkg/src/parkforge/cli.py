"""The parkforge command line interface."""

from __future__ import annotations

import functools
import os
import sys
from pathlib import Path

import click

from . import pipeline
from .config import default_config, default_config_yaml, load_config
from .errors import ParkforgeError

_STAGE_NAMES = {
    "run_segment": "segment",
    "run_vectorize": "vectorize",
    "run_build": "build",
    "run_analyze": "analyze",
}


def _resolve_config(config_path, seed):
    cfg = load_config(config_path) if config_path else default_config()
    if seed is not None:
        cfg.build.seed = seed
        cfg.validate()
    return cfg


def _resolve_out(out, cfg):
    if out:
        return Path(out)
    env = os.environ.get("PARKFORGE_OUT")
    if env:
        return Path(env)
    return Path(cfg.io.out_dir)


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParkforgeError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=False), default=None,
                      help="Pipeline configuration YAML (defaults used when omitted).")(fn)
    fn = click.option("--out", "out", type=click.Path(), default=None,
                      help="Output directory (falls back to $PARKFORGE_OUT, then the config).")(fn)
    fn = click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None,
                      help="Override the build seed from the config.")(fn)
    return fn


@click.group()
@click.version_option(package_name="parkforge")
def main() -> None:
    """Convert a park layout plan into vectors, 3D meshes, and analyses."""


def _run_stage(stage_fn, source, config_path, out, seed) -> None:
    cfg = _resolve_config(config_path, seed)
    out_dir = _resolve_out(out, cfg)
    files = stage_fn(source, cfg, out_dir)
    for path in files:
        click.echo(str(path))


@main.command()
@click.argument("plan_path", type=click.Path())
@_common_options
@_handle_errors
def segment(plan_path, config_path, out, seed) -> None:
    """Preprocess PLAN_PATH and write one mask PNG per category."""
    _run_stage(pipeline.run_segment, plan_path, config_path, out, seed)


@main.command()
@click.argument("masks_dir", type=click.Path())
@_common_options
@_handle_errors
def vectorize(masks_dir, config_path, out, seed) -> None:
    """Extract vector elements from the masks in MASKS_DIR into scene.json."""
    _run_stage(pipeline.run_vectorize, masks_dir, config_path, out, seed)


@main.command()
@click.argument("scene_json", type=click.Path())
@_common_options
@_handle_errors
def build(scene_json, config_path, out, seed) -> None:
    """Generate 3D meshes from SCENE_JSON and write glTF/OBJ files."""
    _run_stage(pipeline.run_build, scene_json, config_path, out, seed)


@main.command()
@click.argument("scene_dir", type=click.Path())
@_common_options
@_handle_errors
def analyze(scene_dir, config_path, out, seed) -> None:
    """Render elevation/slope/drainage overlays for the scene in SCENE_DIR."""
    _run_stage(pipeline.run_analyze, scene_dir, config_path, out, seed)


@main.command(name="pipeline")
@click.argument("plan_path", type=click.Path())
@_common_options
@_handle_errors
def pipeline_cmd(plan_path, config_path, out, seed) -> None:
    """Run segment, vectorize, build, and analyze end to end on PLAN_PATH."""
    cfg = _resolve_config(config_path, seed)
    out_dir = _resolve_out(out, cfg)
    # run via run_pipeline so artifacts and manifest match staged execution,
    # but attribute failures to the stage that raised
    try:
        files = pipeline.run_pipeline(plan_path, cfg, out_dir)
    except ParkforgeError as exc:
        stage = _stage_of_failure(exc)
        click.echo(f"error in stage {stage}: {exc}", err=True)
        sys.exit(exc.exit_code)
    for path in files:
        click.echo(str(path))


def _stage_of_failure(exc: BaseException) -> str:
    tb = exc.__traceback__
    while tb is not None:
        name = tb.tb_frame.f_code.co_name
        if name in _STAGE_NAMES:
            return _STAGE_NAMES[name]
        tb = tb.tb_next
    return "pipeline"


@main.command(name="config-init")
@click.argument("path", type=click.Path(), default="parkforge.yaml")
@_handle_errors
def config_init(path) -> None:
    """Write the default configuration (use '-' for stdout)."""
    text = default_config_yaml()
    if path == "-":
        click.echo(text, nl=False)
        return
    Path(path).write_text(text)
    click.echo(str(path))


if __name__ == "__main__":
    main()
