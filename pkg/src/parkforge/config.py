"""Pipeline configuration: a nested YAML document with full defaults.

``config-init`` emits the commented template below so every tunable is
visible; load_config reports YAML syntax errors with line/column and
field problems with their dotted path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .builders import BuildConfig
from .errors import ConfigError
from .palette import CATEGORIES, DEFAULT_TOLERANCE, Palette, PaletteEntry, default_palette
from .vectorscene import ExtractionParams


@dataclass
class PreprocessingParams:
    lam: float = 0.02
    sharpen_amount: float = 0.0
    contrast_gain: float = 1.0


@dataclass
class AnalysisParams:
    px_per_meter: float = 2.0


@dataclass
class IOParams:
    out_dir: str = "out"
    scale_m_per_px: float = 1.0


@dataclass
class PipelineConfig:
    palette: Palette = field(default_factory=default_palette)
    preprocessing: PreprocessingParams = field(default_factory=PreprocessingParams)
    extraction: ExtractionParams = field(default_factory=ExtractionParams)
    build: BuildConfig = field(default_factory=BuildConfig)
    analysis: AnalysisParams = field(default_factory=AnalysisParams)
    io: IOParams = field(default_factory=IOParams)

    def validate(self) -> None:
        from .errors import ValidationError

        try:
            self.palette.validate()
            self.extraction.validate()
            self.build.validate()
        except ConfigError:
            raise
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc
        if self.preprocessing.lam < 0:
            raise ConfigError("preprocessing.lambda must be >= 0")
        if self.preprocessing.sharpen_amount < 0:
            raise ConfigError("preprocessing.sharpen_amount must be >= 0")
        if self.preprocessing.contrast_gain <= 0:
            raise ConfigError("preprocessing.contrast_gain must be > 0")
        if self.analysis.px_per_meter <= 0:
            raise ConfigError("analysis.px_per_meter must be > 0")
        if self.io.scale_m_per_px <= 0:
            raise ConfigError("io.scale_m_per_px must be > 0")


def default_config() -> PipelineConfig:
    cfg = PipelineConfig()
    cfg.validate()
    return cfg


def _expect_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _take(data: dict, path: str, key: str, kind, default):
    if key not in data:
        return default
    value = data.pop(key)
    try:
        if kind is bool:
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind is int and isinstance(value, bool):
            raise TypeError
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}: expected {kind.__name__}, got {value!r}") from None


def _take_pair(data: dict, path: str, key: str, default):
    if key not in data:
        return default
    value = data.pop(key)
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ConfigError(f"{path}.{key}: expected [min, max], got {value!r}")
    try:
        return (float(value[0]), float(value[1]))
    except (TypeError, ValueError):
        raise ConfigError(f"{path}.{key}: expected numbers, got {value!r}") from None


def _reject_unknown(data: dict, path: str) -> None:
    if data:
        raise ConfigError(f"{path}: unknown keys {sorted(data)}")


def config_from_dict(data: dict) -> PipelineConfig:
    data = dict(_expect_mapping(data, "config"))
    cfg = default_config()

    if "palette" in data:
        raw = _expect_mapping(data.pop("palette"), "palette")
        entries = []
        for category in CATEGORIES:
            if category not in raw:
                raise ConfigError(f"palette: missing category {category!r}")
            spec = _expect_mapping(raw.pop(category), f"palette.{category}")
            color = spec.pop("color", None)
            if (
                not isinstance(color, (list, tuple))
                or len(color) != 3
                or any(not isinstance(c, int) or isinstance(c, bool) for c in color)
            ):
                raise ConfigError(f"palette.{category}.color: expected [r, g, b] integers")
            tolerance = _take(spec, f"palette.{category}", "tolerance", int, DEFAULT_TOLERANCE)
            _reject_unknown(spec, f"palette.{category}")
            entries.append(PaletteEntry(category, tuple(color), tolerance))
        _reject_unknown(raw, "palette")
        cfg.palette = Palette(tuple(entries))

    if "preprocessing" in data:
        raw = _expect_mapping(data.pop("preprocessing"), "preprocessing")
        cfg.preprocessing = PreprocessingParams(
            lam=_take(raw, "preprocessing", "lambda", float, cfg.preprocessing.lam),
            sharpen_amount=_take(raw, "preprocessing", "sharpen_amount", float, cfg.preprocessing.sharpen_amount),
            contrast_gain=_take(raw, "preprocessing", "contrast_gain", float, cfg.preprocessing.contrast_gain),
        )
        _reject_unknown(raw, "preprocessing")

    if "extraction" in data:
        raw = _expect_mapping(data.pop("extraction"), "extraction")
        cfg.extraction = ExtractionParams(
            min_area=_take(raw, "extraction", "min_area", float, cfg.extraction.min_area),
            epsilon=_take(raw, "extraction", "epsilon", float, cfg.extraction.epsilon),
            sample_step=_take(raw, "extraction", "sample_step", float, cfg.extraction.sample_step),
            blur_sigma=_take(raw, "extraction", "blur_sigma", float, cfg.extraction.blur_sigma),
            prune_len=_take(raw, "extraction", "prune_len", float, cfg.extraction.prune_len),
            stride=_take(raw, "extraction", "stride", int, cfg.extraction.stride),
            planting_interval=_take(raw, "extraction", "planting_interval", float, cfg.extraction.planting_interval),
        )
        _reject_unknown(raw, "extraction")

    if "build" in data:
        raw = _expect_mapping(data.pop("build"), "build")
        cfg.build = BuildConfig(
            seed=_take(raw, "build", "seed", int, cfg.build.seed),
            building_height_range=_take_pair(raw, "build", "building_height_range", cfg.build.building_height_range),
            road_width=_take(raw, "build", "road_width", float, cfg.build.road_width),
            city_road_width=_take(raw, "build", "city_road_width", float, cfg.build.city_road_width),
            terrain_amplitude=_take(raw, "build", "terrain_amplitude", float, cfg.build.terrain_amplitude),
            terrain_exponent=_take(raw, "build", "terrain_exponent", float, cfg.build.terrain_exponent),
            terrain_jitter=_take(raw, "build", "terrain_jitter", float, cfg.build.terrain_jitter),
            tree_density=_take(raw, "build", "tree_density", float, cfg.build.tree_density),
            canopy_height_range=_take_pair(raw, "build", "canopy_height_range", cfg.build.canopy_height_range),
            drape=_take(raw, "build", "drape", bool, cfg.build.drape),
        )
        _reject_unknown(raw, "build")

    if "analysis" in data:
        raw = _expect_mapping(data.pop("analysis"), "analysis")
        cfg.analysis = AnalysisParams(
            px_per_meter=_take(raw, "analysis", "px_per_meter", float, cfg.analysis.px_per_meter)
        )
        _reject_unknown(raw, "analysis")

    if "io" in data:
        raw = _expect_mapping(data.pop("io"), "io")
        cfg.io = IOParams(
            out_dir=str(raw.pop("out_dir", cfg.io.out_dir)),
            scale_m_per_px=_take(raw, "io", "scale_m_per_px", float, cfg.io.scale_m_per_px),
        )
        _reject_unknown(raw, "io")

    _reject_unknown(data, "config")
    cfg.validate()
    return cfg


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" (line {mark.line + 1}, column {mark.column + 1})" if mark else ""
        raise ConfigError(f"{path}: YAML parse error{where}: {exc}") from exc
    if data is None:
        data = {}
    return config_from_dict(data)


def default_config_yaml() -> str:
    """The commented template written by ``parkforge config-init``."""
    palette_lines = []
    for entry in default_palette().entries:
        palette_lines.append(
            f"  {entry.category}: {{color: [{entry.color[0]}, {entry.color[1]}, {entry.color[2]}], tolerance: {entry.tolerance}}}"
        )
    palette_block = "\n".join(palette_lines)
    return f"""# parkforge pipeline configuration (all values shown are the defaults)

# Reference color and per-channel tolerance for each element category.
# A pixel belongs to a category when every channel is within
# [color - tolerance, color + tolerance]; ranges must not overlap.
palette:
{palette_block}

preprocessing:
  lambda: 0.02          # L0 smoothing strength; 0 skips smoothing entirely
  sharpen_amount: 0.0   # unsharp-mask weight; 0 disables sharpening
  contrast_gain: 1.0    # linear stretch about mid-gray; 1 is the identity

extraction:             # pixel units throughout
  min_area: 50.0        # drop region/building contours smaller than this area
  epsilon: 2.0          # polyline simplification tolerance
  sample_step: 4.0      # arc-length spacing of smoothed outline samples
  blur_sigma: 1.0       # Gaussian blur before skeletonizing linear categories
  prune_len: 10.0       # discard skeleton paths shorter than this
  stride: 3             # keep every stride-th skeleton point (endpoints always kept)
  planting_interval: 10.0  # spacing of planting points along cluster outlines

build:
  seed: 0                         # master seed; all randomness derives from it
  building_height_range: [3.0, 15.0]  # meters, uniform per building
  road_width: 3.0                 # garden path width, meters
  city_road_width: 12.0           # city road width, meters
  terrain_amplitude: 3.0          # peak |z| of terrain, meters
  terrain_exponent: 1.5           # distance-to-boundary falloff shape
  terrain_jitter: 0.2             # relative elevation noise, in [0, 1)
  tree_density: 0.02              # cluster interior trees per square meter
  canopy_height_range: [2.0, 5.0] # cluster canopy diameter range, meters
  drape: false                    # project roads onto the terrain (off reproduces overlaps)

analysis:
  px_per_meter: 2.0     # overlay rendering resolution

io:
  out_dir: out          # default artifact directory (CLI --out / PARKFORGE_OUT override)
  scale_m_per_px: 1.0   # physical size of one plan pixel
"""
