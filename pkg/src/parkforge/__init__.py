"""parkforge: park layout plans to vector scenes, 3D meshes, and analyses."""

from .analysis import AnalysisOverlay, drainage_overlay, elevation_overlay, slope_overlay
from .builders import (
    BuildConfig,
    Scene3D,
    assemble_and_export,
    build_building,
    build_pavement,
    build_plantings,
    build_road,
    build_scene3d,
    build_terrain,
    build_terrain_fields,
)
from .config import PipelineConfig, default_config, load_config
from .contours import TracedContour, morphological_clean, trace_contours
from .errors import (
    ConfigError,
    FormatError,
    InternalError,
    ParkforgeError,
    PipelineIOError,
    ValidationError,
)
from .estimators import (
    OverlayAnalyzer,
    PaletteSegmenter,
    PlanPreprocessor,
    SceneBuilder,
    SceneVectorizer,
)
from .export import export_scene, write_gltf, write_obj
from .meshes import Mesh3D, TerrainField
from .palette import CATEGORIES, Palette, PaletteEntry, default_palette
from .preprocess import enhance, smooth
from .raster import RasterPlan, load_plan, save_plan_png
from .render import render_overlay
from .segmentation import CategoryMask, segment
from .skeleton import skeleton_paths, thin
from .vectorscene import (
    SCENE_SCHEMA,
    BuildingFootprint,
    Centerline,
    ExtractionParams,
    PlantingCluster,
    PlantingPlan,
    RegionOutline,
    TreeMarker,
    VectorScene,
    assemble_scene,
    extract_centerlines,
    extract_plantings,
    extract_regions,
    fit_building,
    load_scene_json,
    save_scene_json,
    scene_from_dict,
    scene_to_dict,
    validate_scene_dict,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisOverlay",
    "BuildConfig",
    "BuildingFootprint",
    "CATEGORIES",
    "CategoryMask",
    "Centerline",
    "ConfigError",
    "ExtractionParams",
    "FormatError",
    "InternalError",
    "Mesh3D",
    "OverlayAnalyzer",
    "Palette",
    "PaletteEntry",
    "PaletteSegmenter",
    "ParkforgeError",
    "PipelineConfig",
    "PipelineIOError",
    "PlanPreprocessor",
    "PlantingCluster",
    "PlantingPlan",
    "RasterPlan",
    "RegionOutline",
    "SCENE_SCHEMA",
    "Scene3D",
    "SceneBuilder",
    "SceneVectorizer",
    "TerrainField",
    "TracedContour",
    "TreeMarker",
    "ValidationError",
    "VectorScene",
    "assemble_and_export",
    "assemble_scene",
    "build_building",
    "build_pavement",
    "build_plantings",
    "build_road",
    "build_scene3d",
    "build_terrain",
    "build_terrain_fields",
    "default_config",
    "default_palette",
    "drainage_overlay",
    "elevation_overlay",
    "enhance",
    "export_scene",
    "extract_centerlines",
    "extract_plantings",
    "extract_regions",
    "fit_building",
    "load_config",
    "load_plan",
    "load_scene_json",
    "morphological_clean",
    "render_overlay",
    "save_plan_png",
    "save_scene_json",
    "scene_from_dict",
    "scene_to_dict",
    "segment",
    "skeleton_paths",
    "slope_overlay",
    "smooth",
    "thin",
    "trace_contours",
    "validate_scene_dict",
    "write_gltf",
    "write_obj",
]
