import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import Pipeline

from conftest import build_roundtrip_plan
from parkforge.builders import Scene3D
from parkforge.errors import ValidationError
from parkforge.estimators import (
    OverlayAnalyzer,
    PaletteSegmenter,
    PlanPreprocessor,
    SceneBuilder,
    SceneVectorizer,
)
from parkforge.raster import RasterPlan


def test_get_set_params_round_trip():
    pre = PlanPreprocessor(lam=0.05, sharpen_amount=0.3)
    params = pre.get_params()
    assert params["lam"] == 0.05
    assert params["sharpen_amount"] == 0.3
    pre.set_params(lam=0.01)
    assert pre.lam == 0.01

    builder = SceneBuilder(seed=7, road_width=5.0)
    assert builder.get_params()["road_width"] == 5.0
    cloned = clone(builder)
    assert cloned.get_params() == builder.get_params()


def test_fit_returns_self_and_is_stateless():
    plan = RasterPlan(np.zeros((8, 8, 3), dtype=np.uint8))
    seg = PaletteSegmenter()
    assert seg.fit(plan) is seg
    a = seg.transform(plan)
    b = seg.transform(plan)
    for ma, mb in zip(a, b):
        assert np.array_equal(ma.bits, mb.bits)


def test_transform_type_checks():
    with pytest.raises(ValidationError):
        PlanPreprocessor().transform(np.zeros((4, 4, 3)))
    with pytest.raises(ValidationError):
        SceneBuilder().transform("not a scene")
    with pytest.raises(ValidationError):
        SceneVectorizer().transform(42)
    with pytest.raises(ValidationError):
        OverlayAnalyzer().transform(object())


def test_sklearn_pipeline_composition():
    plan, _ = build_roundtrip_plan()
    stages = Pipeline(
        [
            ("preprocess", PlanPreprocessor()),
            ("segment", PaletteSegmenter()),
            ("vectorize", SceneVectorizer()),
            ("build", SceneBuilder(seed=11)),
            ("analyze", OverlayAnalyzer()),
        ]
    )
    overlays = stages.fit_transform(plan)
    assert set(overlays) == {"elevation", "slope", "drainage"}
    assert overlays["elevation"].face_count > 0

    scene3d = Pipeline(stages.steps[:-1]).fit_transform(plan)
    assert isinstance(scene3d, Scene3D)
    assert any(m.category == "building" for m in scene3d.meshes)


def test_pipeline_honors_set_params():
    plan, _ = build_roundtrip_plan()
    stages = Pipeline(
        [
            ("preprocess", PlanPreprocessor(lam=0.0)),
            ("segment", PaletteSegmenter()),
            ("vectorize", SceneVectorizer()),
            ("build", SceneBuilder(seed=1, building_height_range=(4.0, 4.0))),
        ]
    )
    stages.set_params(build__building_height_range=(9.0, 9.0))
    scene3d = stages.fit_transform(plan)
    heights = [m.vertices[:, 2].max() for m in scene3d.meshes if m.category == "building"]
    assert heights and all(h == pytest.approx(9.0) for h in heights)
