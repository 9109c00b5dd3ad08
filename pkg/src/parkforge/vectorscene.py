"""Category-appropriate vector elements extracted from masks.

Buildings become rectangles, free-form regions become simplified and
Bezier-smoothed outlines, elongated categories become skeleton
centerlines, and plantings split into single trees (minimum enclosing
circles) and clusters (outline plus interval-sampled planting points).
The assembled scene serializes to JSON with a published schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np
from scipy.ndimage import gaussian_filter

from .contours import TracedContour, morphological_clean, trace_contours
from .errors import PipelineIOError, ValidationError
from .geometry import (
    convex_hull,
    dedupe_consecutive,
    min_area_rect,
    min_enclosing_circle,
    polyline_length,
    rdp_closed,
    resample_ring,
    smooth_closed_ring,
    subdivide_ring,
)
from .palette import CATEGORIES
from .segmentation import CategoryMask
from .skeleton import skeleton_paths, thin

REGION_CATEGORIES = ("green_space", "water", "pavement", "red_line")
LINEAR_CATEGORIES = ("road", "city_road")

# contours below this pixel area are single trees, at or above it clusters
SINGLE_PLANT_MAX_AREA = 30

_REGION_CLEAN_KERNEL = 3
_MIN_SINGLE_RADIUS = 0.5


@dataclass
class BuildingFootprint:
    """Exactly 4 corners in ring order; rotated marks a non-axis-aligned fit."""

    corners: np.ndarray
    rotated: bool


@dataclass
class RegionOutline:
    category: str
    polygon: np.ndarray
    smooth_samples: np.ndarray
    area_px: int


@dataclass
class Centerline:
    category: str
    paths: list[np.ndarray]


@dataclass
class TreeMarker:
    center: tuple[float, float]
    radius: float


@dataclass
class PlantingCluster:
    outline: np.ndarray
    points: np.ndarray


@dataclass
class PlantingPlan:
    singles: list[TreeMarker] = field(default_factory=list)
    clusters: list[PlantingCluster] = field(default_factory=list)


@dataclass
class VectorScene:
    width: int
    height: int
    scale: float
    buildings: list[BuildingFootprint] = field(default_factory=list)
    regions: list[RegionOutline] = field(default_factory=list)
    centerlines: list[Centerline] = field(default_factory=list)
    plantings: PlantingPlan = field(default_factory=PlantingPlan)


@dataclass
class ExtractionParams:
    """Thresholds for the mask-to-vector stage (pixel units)."""

    min_area: float = 50.0
    epsilon: float = 2.0
    sample_step: float = 4.0
    blur_sigma: float = 1.0
    prune_len: float = 10.0
    stride: int = 3
    planting_interval: float = 10.0

    def validate(self) -> None:
        if self.min_area < 0:
            raise ValidationError("extraction.min_area must be >= 0")
        if self.epsilon <= 0:
            raise ValidationError("extraction.epsilon must be > 0")
        if self.sample_step < 1:
            raise ValidationError("extraction.sample_step must be >= 1")
        if self.blur_sigma < 0:
            raise ValidationError("extraction.blur_sigma must be >= 0")
        if self.prune_len < 0:
            raise ValidationError("extraction.prune_len must be >= 0")
        if self.stride < 1:
            raise ValidationError("extraction.stride must be >= 1")
        if self.planting_interval < 1:
            raise ValidationError("extraction.planting_interval must be >= 1")


# ---------------------------------------------------------------------------
# per-category extraction
# ---------------------------------------------------------------------------

def fit_building(contour: TracedContour | np.ndarray) -> BuildingFootprint:
    """Rectangle fit: axis-aligned bbox when the best rotated rectangle is
    within 1 degree of the axes, otherwise the minimum-area rectangle."""
    points = contour.points if isinstance(contour, TracedContour) else np.asarray(contour)
    hull = convex_hull(points)
    if len(hull) < 3:
        raise ValidationError("building contour is degenerate (collinear points)")
    corners, angle = min_area_rect(hull)
    if min(angle, 90.0 - angle) <= 1.0:
        x0, y0 = points.min(axis=0)
        x1, y1 = points.max(axis=0)
        bbox = np.array([[x0, y0], [x0, y1], [x1, y1], [x1, y0]], dtype=np.float64)
        return BuildingFootprint(bbox, rotated=False)
    return BuildingFootprint(corners, rotated=True)


def extract_regions(
    mask: CategoryMask,
    category: str,
    min_area: float = 50.0,
    epsilon: float = 2.0,
    sample_step: float = 4.0,
) -> list[RegionOutline]:
    """Clean, trace, filter by area, simplify, smooth, resample."""
    cleaned = morphological_clean(mask, _REGION_CLEAN_KERNEL, open_then_close=True)
    regions = []
    for contour in trace_contours(cleaned):
        if contour.area_px < min_area or len(contour.points) < 3:
            continue
        ring = dedupe_consecutive(contour.points.astype(np.float64))
        if len(ring) < 3:
            continue
        simplified = rdp_closed(ring, epsilon)
        if len(simplified) < 3:
            continue
        # long straight edges get collinear control points so the curve
        # only rounds true corners (by at most ~half the subdivision step)
        controls = subdivide_ring(simplified, max_len=4.0 * epsilon)
        dense = smooth_closed_ring(controls)
        samples = resample_ring(dense, sample_step)
        if len(samples) < 3:
            samples = dense
        regions.append(RegionOutline(category, simplified, samples, contour.area_px))
    return regions


def extract_centerlines(
    mask: CategoryMask,
    category: str,
    blur_sigma: float = 1.0,
    prune_len: float = 10.0,
    stride: int = 3,
) -> Centerline:
    """Blur, binarize at 128, thin, split into paths, prune, sparsify."""
    if blur_sigma > 0:
        blurred = gaussian_filter(mask.bits.astype(np.float64), sigma=blur_sigma)
        binary = blurred >= 128.0
    else:
        binary = mask.bits >= 128
    skeleton = thin(binary)
    paths = []
    for path in skeleton_paths(skeleton):
        if polyline_length(path) < prune_len:
            continue
        idx = list(range(0, len(path), stride))
        if idx[-1] != len(path) - 1:
            idx.append(len(path) - 1)
        paths.append(path[idx].astype(np.float64))
    return Centerline(category, paths)


def extract_plantings(mask: CategoryMask, interval: float = 10.0) -> PlantingPlan:
    """Small contours become single trees, larger ones planting clusters."""
    plan = PlantingPlan()
    for contour in trace_contours(mask):
        if contour.area_px < SINGLE_PLANT_MAX_AREA:
            cx, cy, radius = min_enclosing_circle(contour.points)
            plan.singles.append(TreeMarker((cx, cy), max(radius, _MIN_SINGLE_RADIUS)))
        else:
            ring = dedupe_consecutive(contour.points.astype(np.float64))
            points = resample_ring(ring, interval) if len(ring) >= 3 else ring.copy()
            plan.clusters.append(PlantingCluster(contour.points.astype(np.float64), points))
    return plan


def assemble_scene(
    masks: dict[str, CategoryMask] | list[CategoryMask],
    params: ExtractionParams | None = None,
    scale: float = 1.0,
) -> VectorScene:
    """Dispatch every category mask to its extractor and merge the results.

    Building contours below min_area or with a degenerate hull are
    skipped.  The red-line boundary is recorded as a region outline but
    produces no buildable geometry downstream.
    """
    params = params or ExtractionParams()
    params.validate()
    by_category = {m.category: m for m in masks} if not isinstance(masks, dict) else dict(masks)
    missing = [c for c in CATEGORIES if c not in by_category]
    if missing:
        raise ValidationError(f"missing masks for categories: {', '.join(missing)}")
    shapes = {m.bits.shape for m in by_category.values()}
    if len(shapes) != 1:
        raise ValidationError(f"mask dimensions disagree: {sorted(shapes)}")
    height, width = shapes.pop()

    scene = VectorScene(width=width, height=height, scale=scale)

    for contour in trace_contours(by_category["building"]):
        if contour.area_px < params.min_area or len(contour.points) < 3:
            continue
        if len(convex_hull(contour.points)) < 3:
            continue
        scene.buildings.append(fit_building(contour))

    for category in ("green_space", "water", "pavement", "red_line"):
        scene.regions.extend(
            extract_regions(
                by_category[category],
                category,
                min_area=params.min_area,
                epsilon=params.epsilon,
                sample_step=params.sample_step,
            )
        )

    for category in LINEAR_CATEGORIES:
        scene.centerlines.append(
            extract_centerlines(
                by_category[category],
                category,
                blur_sigma=params.blur_sigma,
                prune_len=params.prune_len,
                stride=params.stride,
            )
        )

    scene.plantings = extract_plantings(by_category["plant"], params.planting_interval)
    return scene


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_RING = {"type": "array", "items": _PAIR, "minItems": 3}

SCENE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "parkforge vector scene",
    "type": "object",
    "required": ["width", "height", "scale", "buildings", "regions", "centerlines", "plantings"],
    "additionalProperties": False,
    "properties": {
        "width": {"type": "integer", "minimum": 1},
        "height": {"type": "integer", "minimum": 1},
        "scale": {"type": "number", "exclusiveMinimum": 0},
        "buildings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["corners", "rotated"],
                "additionalProperties": False,
                "properties": {
                    "corners": {"type": "array", "items": _PAIR, "minItems": 4, "maxItems": 4},
                    "rotated": {"type": "boolean"},
                },
            },
        },
        "regions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["category", "polygon", "smooth_samples", "area_px"],
                "additionalProperties": False,
                "properties": {
                    "category": {"enum": list(REGION_CATEGORIES)},
                    "polygon": _RING,
                    "smooth_samples": _RING,
                    "area_px": {"type": "number", "minimum": 0},
                },
            },
        },
        "centerlines": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["category", "paths"],
                "additionalProperties": False,
                "properties": {
                    "category": {"enum": list(LINEAR_CATEGORIES)},
                    "paths": {"type": "array", "items": {"type": "array", "items": _PAIR, "minItems": 2}},
                },
            },
        },
        "plantings": {
            "type": "object",
            "required": ["singles", "clusters"],
            "additionalProperties": False,
            "properties": {
                "singles": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["center", "radius"],
                        "additionalProperties": False,
                        "properties": {
                            "center": _PAIR,
                            "radius": {"type": "number", "exclusiveMinimum": 0},
                        },
                    },
                },
                "clusters": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["outline", "points"],
                        "additionalProperties": False,
                        "properties": {
                            "outline": _RING,
                            "points": {"type": "array", "items": _PAIR, "minItems": 1},
                        },
                    },
                },
            },
        },
    },
}


def _pairs(arr: np.ndarray) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in np.asarray(arr, dtype=np.float64)]


def scene_to_dict(scene: VectorScene) -> dict:
    return {
        "width": int(scene.width),
        "height": int(scene.height),
        "scale": float(scene.scale),
        "buildings": [
            {"corners": _pairs(b.corners), "rotated": bool(b.rotated)} for b in scene.buildings
        ],
        "regions": [
            {
                "category": r.category,
                "polygon": _pairs(r.polygon),
                "smooth_samples": _pairs(r.smooth_samples),
                "area_px": float(r.area_px),
            }
            for r in scene.regions
        ],
        "centerlines": [
            {"category": c.category, "paths": [_pairs(p) for p in c.paths]}
            for c in scene.centerlines
        ],
        "plantings": {
            "singles": [
                {"center": [float(s.center[0]), float(s.center[1])], "radius": float(s.radius)}
                for s in scene.plantings.singles
            ],
            "clusters": [
                {"outline": _pairs(c.outline), "points": _pairs(c.points)}
                for c in scene.plantings.clusters
            ],
        },
    }


def validate_scene_dict(data: dict) -> None:
    """Raise ValidationError carrying a JSON pointer on schema violations."""
    try:
        jsonschema.validate(data, SCENE_SCHEMA)
    except jsonschema.ValidationError as exc:
        pointer = "/" + "/".join(str(p) for p in exc.absolute_path)
        raise ValidationError(f"scene JSON invalid at {pointer or '/'}: {exc.message}") from exc


def scene_from_dict(data: dict) -> VectorScene:
    validate_scene_dict(data)
    scene = VectorScene(width=int(data["width"]), height=int(data["height"]), scale=float(data["scale"]))
    for b in data["buildings"]:
        scene.buildings.append(
            BuildingFootprint(np.asarray(b["corners"], dtype=np.float64), bool(b["rotated"]))
        )
    for r in data["regions"]:
        scene.regions.append(
            RegionOutline(
                r["category"],
                np.asarray(r["polygon"], dtype=np.float64),
                np.asarray(r["smooth_samples"], dtype=np.float64),
                int(r["area_px"]),
            )
        )
    for c in data["centerlines"]:
        scene.centerlines.append(
            Centerline(c["category"], [np.asarray(p, dtype=np.float64) for p in c["paths"]])
        )
    scene.plantings = PlantingPlan(
        singles=[
            TreeMarker((float(s["center"][0]), float(s["center"][1])), float(s["radius"]))
            for s in data["plantings"]["singles"]
        ],
        clusters=[
            PlantingCluster(
                np.asarray(c["outline"], dtype=np.float64),
                np.asarray(c["points"], dtype=np.float64),
            )
            for c in data["plantings"]["clusters"]
        ],
    )
    return scene


def save_scene_json(scene: VectorScene, path) -> Path:
    path = Path(path)
    data = scene_to_dict(scene)
    validate_scene_dict(data)
    try:
        path.write_text(json.dumps(data, indent=2) + "\n")
    except OSError as exc:
        raise PipelineIOError(f"cannot write {path}: {exc}") from exc
    return path


def load_scene_json(path) -> VectorScene:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise PipelineIOError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    return scene_from_dict(data)
