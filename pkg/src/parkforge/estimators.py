"""Scikit-learn style transformers, one per pipeline stage.

Every stage is stateless: ``fit`` records nothing and ``transform`` is a
pure function of its input and the constructor parameters, so stages
compose in :class:`sklearn.pipeline.Pipeline` and expose the usual
``get_params`` / ``set_params`` surface.

    >>> from sklearn.pipeline import Pipeline
    >>> stages = Pipeline([
    ...     ("preprocess", PlanPreprocessor()),
    ...     ("segment", PaletteSegmenter()),
    ...     ("vectorize", SceneVectorizer()),
    ...     ("build", SceneBuilder(seed=7)),
    ... ])
    >>> scene3d = stages.fit_transform(plan)          # doctest: +SKIP
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin

from .analysis import drainage_overlay, elevation_overlay, slope_overlay
from .builders import BuildConfig, Scene3D, build_scene3d
from .errors import ValidationError
from .palette import Palette, default_palette
from .preprocess import enhance, smooth
from .raster import RasterPlan
from .segmentation import CategoryMask, segment
from .vectorscene import ExtractionParams, VectorScene, assemble_scene


def _check_type(x, expected, stage: str):
    if not isinstance(x, expected):
        raise ValidationError(
            f"{stage} expects {expected.__name__}, got {type(x).__name__}"
        )
    return x


class PlanPreprocessor(BaseEstimator, TransformerMixin):
    """Smooth color blocks and optionally sharpen/stretch the plan image.

    Parameters
    ----------
    lam : L0 smoothing strength; 0 disables smoothing entirely.
    sharpen_amount : unsharp-mask weight; 0 disables sharpening.
    contrast_gain : linear stretch about mid-gray; 1 is the identity.
    """

    def __init__(self, lam: float = 0.02, sharpen_amount: float = 0.0, contrast_gain: float = 1.0):
        self.lam = lam
        self.sharpen_amount = sharpen_amount
        self.contrast_gain = contrast_gain

    def fit(self, X, y=None):
        return self

    def transform(self, X: RasterPlan) -> RasterPlan:
        plan = _check_type(X, RasterPlan, "PlanPreprocessor")
        return enhance(smooth(plan, self.lam), self.sharpen_amount, self.contrast_gain)


class PaletteSegmenter(BaseEstimator, TransformerMixin):
    """Split a plan into one binary mask per palette category."""

    def __init__(self, palette: Palette | None = None):
        self.palette = palette

    def fit(self, X, y=None):
        return self

    def transform(self, X: RasterPlan) -> list[CategoryMask]:
        plan = _check_type(X, RasterPlan, "PaletteSegmenter")
        return segment(plan, self.palette or default_palette())


class SceneVectorizer(BaseEstimator, TransformerMixin):
    """Turn category masks into a VectorScene.

    Thresholds are in pixel units; ``scale`` (meters per pixel) is carried
    into the scene for the 3D stage.
    """

    def __init__(
        self,
        min_area: float = 50.0,
        epsilon: float = 2.0,
        sample_step: float = 4.0,
        blur_sigma: float = 1.0,
        prune_len: float = 10.0,
        stride: int = 3,
        planting_interval: float = 10.0,
        scale: float = 1.0,
    ):
        self.min_area = min_area
        self.epsilon = epsilon
        self.sample_step = sample_step
        self.blur_sigma = blur_sigma
        self.prune_len = prune_len
        self.stride = stride
        self.planting_interval = planting_interval
        self.scale = scale

    def fit(self, X, y=None):
        return self

    def transform(self, X: list[CategoryMask]) -> VectorScene:
        if not isinstance(X, (list, tuple, dict)):
            raise ValidationError("SceneVectorizer expects a list of CategoryMask")
        params = ExtractionParams(
            min_area=self.min_area,
            epsilon=self.epsilon,
            sample_step=self.sample_step,
            blur_sigma=self.blur_sigma,
            prune_len=self.prune_len,
            stride=self.stride,
            planting_interval=self.planting_interval,
        )
        return assemble_scene(X, params, scale=self.scale)


class SceneBuilder(BaseEstimator, TransformerMixin):
    """Generate the category-tagged 3D meshes from a VectorScene."""

    def __init__(
        self,
        seed: int = 0,
        building_height_range: tuple[float, float] = (3.0, 15.0),
        road_width: float = 3.0,
        city_road_width: float = 12.0,
        terrain_amplitude: float = 3.0,
        terrain_exponent: float = 1.5,
        terrain_jitter: float = 0.2,
        tree_density: float = 0.02,
        canopy_height_range: tuple[float, float] = (2.0, 5.0),
        drape: bool = False,
    ):
        self.seed = seed
        self.building_height_range = building_height_range
        self.road_width = road_width
        self.city_road_width = city_road_width
        self.terrain_amplitude = terrain_amplitude
        self.terrain_exponent = terrain_exponent
        self.terrain_jitter = terrain_jitter
        self.tree_density = tree_density
        self.canopy_height_range = canopy_height_range
        self.drape = drape

    def build_config(self) -> BuildConfig:
        return BuildConfig(
            seed=self.seed,
            building_height_range=tuple(self.building_height_range),
            road_width=self.road_width,
            city_road_width=self.city_road_width,
            terrain_amplitude=self.terrain_amplitude,
            terrain_exponent=self.terrain_exponent,
            terrain_jitter=self.terrain_jitter,
            tree_density=self.tree_density,
            canopy_height_range=tuple(self.canopy_height_range),
            drape=self.drape,
        )

    def fit(self, X, y=None):
        return self

    def transform(self, X: VectorScene) -> Scene3D:
        scene = _check_type(X, VectorScene, "SceneBuilder")
        return build_scene3d(scene, self.build_config())


class OverlayAnalyzer(BaseEstimator, TransformerMixin):
    """Compute the elevation, slope, and drainage overlays for a Scene3D."""

    def __init__(self, fallback_bounds: tuple[float, float, float, float] | None = None):
        self.fallback_bounds = fallback_bounds

    def fit(self, X, y=None):
        return self

    def transform(self, X: Scene3D) -> dict:
        scene = _check_type(X, Scene3D, "OverlayAnalyzer")
        fields = scene.terrain_fields
        meshes = [f.mesh for f in fields]
        return {
            "elevation": elevation_overlay(fields, self.fallback_bounds),
            "slope": slope_overlay(meshes, self.fallback_bounds),
            "drainage": drainage_overlay(fields, self.fallback_bounds),
        }
