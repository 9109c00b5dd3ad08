import numpy as np
import pytest
from PIL import Image

from parkforge.errors import FormatError, PipelineIOError, ValidationError
from parkforge.raster import RasterPlan, load_plan, save_plan_png


def test_load_canonical_size(tmp_path):
    img = np.random.default_rng(0).integers(0, 256, (256, 256, 3), dtype=np.uint8)
    path = tmp_path / "plan.png"
    Image.fromarray(img).save(path)
    plan = load_plan(path, scale=1.0)
    assert (plan.width, plan.height) == (256, 256)
    assert np.array_equal(plan.pixels, img)
    assert plan.scale == 1.0


def test_load_single_red_pixel(tmp_path):
    path = tmp_path / "dot.png"
    Image.fromarray(np.array([[[255, 0, 0]]], dtype=np.uint8)).save(path)
    plan = load_plan(path)
    assert plan.pixels.shape == (1, 1, 3)
    assert tuple(plan.pixels[0, 0]) == (255, 0, 0)


def test_load_discards_alpha(tmp_path):
    rgba = np.zeros((4, 4, 4), dtype=np.uint8)
    rgba[..., :3] = (10, 20, 30)
    rgba[..., 3] = 77
    path = tmp_path / "rgba.png"
    Image.fromarray(rgba, mode="RGBA").save(path)
    plan = load_plan(path)
    assert plan.pixels.shape == (4, 4, 3)
    assert tuple(plan.pixels[0, 0]) == (10, 20, 30)


def test_load_empty_file_is_io_error(tmp_path):
    path = tmp_path / "empty.png"
    path.write_bytes(b"")
    with pytest.raises(PipelineIOError):
        load_plan(path)


def test_load_missing_file_is_io_error(tmp_path):
    with pytest.raises(PipelineIOError):
        load_plan(tmp_path / "nope.png")


def test_load_non_png_is_format_error(tmp_path):
    path = tmp_path / "plan.png"
    Image.fromarray(np.zeros((4, 4, 3), dtype=np.uint8)).save(path, format="JPEG")
    with pytest.raises(FormatError):
        load_plan(path)


def test_load_garbage_is_format_error(tmp_path):
    path = tmp_path / "garbage.png"
    path.write_bytes(b"this is not an image at all, not even close")
    with pytest.raises(FormatError):
        load_plan(path)


def test_plan_validation():
    with pytest.raises(ValidationError):
        RasterPlan(np.zeros((4, 4), dtype=np.uint8))
    with pytest.raises(ValidationError):
        RasterPlan(np.zeros((4, 4, 3), dtype=np.float64))
    with pytest.raises(ValidationError):
        RasterPlan(np.zeros((4, 4, 3), dtype=np.uint8), scale=0.0)
    with pytest.raises(ValidationError):
        RasterPlan(np.zeros((4, 4, 3), dtype=np.uint8), scale=-1.0)


def test_save_round_trip(tmp_path):
    img = np.random.default_rng(1).integers(0, 256, (16, 8, 3), dtype=np.uint8)
    plan = RasterPlan(img, scale=2.5)
    path = save_plan_png(plan, tmp_path / "out.png")
    again = load_plan(path, scale=2.5)
    assert np.array_equal(again.pixels, img)
