import json

import numpy as np
import pytest

import oracles
from conftest import empty_masks, mask_from_bool
from parkforge.contours import trace_contours
from parkforge.errors import ValidationError
from parkforge.palette import CATEGORIES
from parkforge.segmentation import CategoryMask
from parkforge.vectorscene import (
    ExtractionParams,
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


def disc_mask(category, cx, cy, r, size=128):
    yy, xx = np.mgrid[0:size, 0:size]
    return mask_from_bool(category, (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r)


# ---------------------------------------------------------------------------
# buildings
# ---------------------------------------------------------------------------

def test_fit_building_axis_aligned_is_fixed_point():
    fg = np.zeros((30, 30), bool)
    fg[10:16, 8:18] = True  # 10 wide x 6 tall
    contour = trace_contours(mask_from_bool("building", fg))[0]
    fp = fit_building(contour)
    assert not fp.rotated
    corners = {tuple(c) for c in fp.corners}
    assert corners == {(8.0, 10.0), (17.0, 10.0), (17.0, 15.0), (8.0, 15.0)}


def test_fit_building_rotated_rectangle():
    # analytic rectangle 20 x 10 rotated 45 degrees about its center
    base = np.array([[-10, -5], [10, -5], [10, 5], [-10, 5]], dtype=float)
    t = np.linspace(0, 1, 25)[:, None]
    edges = [base[i] + t * (base[(i + 1) % 4] - base[i]) for i in range(4)]
    outline = np.vstack(edges)
    ang = np.deg2rad(45.0)
    rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
    pts = outline @ rot.T + np.array([50.0, 50.0])
    fp = fit_building(pts)
    assert fp.rotated
    expected = base @ rot.T + np.array([50.0, 50.0])
    assert oracles.hausdorff(fp.corners, expected) <= 1.0
    area_ref, _ = oracles.brute_min_area_rect(pts)
    assert oracles.shoelace_area(fp.corners) == pytest.approx(area_ref, rel=1e-9)


def test_fit_building_l_shape_covers_pixels():
    fg = np.zeros((40, 40), bool)
    fg[5:25, 5:12] = True
    fg[18:25, 5:30] = True
    contour = trace_contours(mask_from_bool("building", fg))[0]
    fp = fit_building(contour)
    area_ref, _ = oracles.brute_min_area_rect(contour.points.astype(float))
    assert oracles.shoelace_area(fp.corners) >= contour.area_px * 0.8
    rect_area = oracles.shoelace_area(fp.corners)
    assert rect_area == pytest.approx(area_ref, rel=1e-9) or not fp.rotated


def test_fit_building_rejects_collinear():
    pts = np.column_stack([np.arange(10), np.full(10, 3)]).astype(float)
    with pytest.raises(ValidationError):
        fit_building(pts)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

def test_extract_regions_circle_fidelity():
    mask = disc_mask("water", 64, 64, 40)
    regions = extract_regions(mask, "water", min_area=100, epsilon=2.0, sample_step=4.0)
    assert len(regions) == 1
    region = regions[0]
    radial = np.hypot(region.smooth_samples[:, 0] - 64, region.smooth_samples[:, 1] - 64)
    assert np.abs(radial - 40.0).max() <= 2.5
    assert region.area_px == pytest.approx(np.pi * 40**2, rel=0.05)


def test_extract_regions_area_filter():
    mask = disc_mask("water", 20, 20, 4, size=40)  # ~50 px
    assert extract_regions(mask, "water", min_area=100, epsilon=2.0, sample_step=4.0) == []


def test_extract_regions_square_simplifies_to_few_vertices():
    fg = np.zeros((60, 60), bool)
    fg[10:50, 10:50] = True
    regions = extract_regions(mask_from_bool("green_space", fg), "green_space")
    assert len(regions) == 1
    assert len(regions[0].polygon) <= 8


def test_extract_regions_empty_mask():
    mask = mask_from_bool("water", np.zeros((20, 20), bool))
    assert extract_regions(mask, "water") == []


# ---------------------------------------------------------------------------
# centerlines
# ---------------------------------------------------------------------------

def test_extract_centerlines_bar():
    fg = np.zeros((20, 60), bool)
    fg[9:12, 5:55] = True
    cl = extract_centerlines(mask_from_bool("road", fg), "road", blur_sigma=0.0, prune_len=10, stride=3)
    assert cl.category == "road"
    assert len(cl.paths) == 1
    path = cl.paths[0]
    assert np.abs(path[:, 1] - 10).max() <= 1.0
    # stride sampling always keeps the endpoints
    skel_path = cl.paths[0]
    assert skel_path[0, 0] in (6.0, 7.0, 5.0) or skel_path[-1, 0] >= 50


def test_extract_centerlines_empty():
    cl = extract_centerlines(mask_from_bool("road", np.zeros((10, 10), bool)), "road")
    assert cl.paths == []


def test_extract_centerlines_prunes_short_paths():
    fg = np.zeros((30, 30), bool)
    fg[5:8, 5:9] = True  # tiny 4-px-long stub
    cl = extract_centerlines(mask_from_bool("road", fg), "road", blur_sigma=0.0, prune_len=10)
    assert cl.paths == []


# ---------------------------------------------------------------------------
# plantings
# ---------------------------------------------------------------------------

def test_extract_plantings_single_circle():
    mask = disc_mask("plant", 20, 22, 3, size=40)  # area 29 < 30
    plan = extract_plantings(mask)
    assert len(plan.singles) == 1 and len(plan.clusters) == 0
    single = plan.singles[0]
    assert np.hypot(single.center[0] - 20, single.center[1] - 22) <= 1.0
    assert abs(single.radius - 3.0) <= 1.0
    # oracle: exhaustive pair/triple minimum enclosing circle
    contour = trace_contours(mask)[0]
    bx, by, br = oracles.brute_min_circle(contour.points.astype(float))
    assert single.radius == pytest.approx(br, abs=1e-6)
    assert np.hypot(single.center[0] - bx, single.center[1] - by) <= 1e-6


def test_extract_plantings_cluster_interval_sampling():
    fg = np.zeros((40, 40), bool)
    fg[5:26, 5:26] = True  # 21x21 square: ring arc length 80
    plan = extract_plantings(mask_from_bool("plant", fg), interval=10.0)
    assert len(plan.clusters) == 1 and len(plan.singles) == 0
    points = plan.clusters[0].points
    assert len(points) == 8
    gaps = np.hypot(*np.diff(points, axis=0).T)
    assert (np.abs(gaps - 10.0) <= 1.0).all()


def test_extract_plantings_empty():
    plan = extract_plantings(mask_from_bool("plant", np.zeros((10, 10), bool)))
    assert plan.singles == [] and plan.clusters == []


def test_extract_plantings_one_pixel_gets_positive_radius():
    fg = np.zeros((10, 10), bool)
    fg[4, 5] = True
    plan = extract_plantings(mask_from_bool("plant", fg))
    assert len(plan.singles) == 1
    assert plan.singles[0].radius > 0


# ---------------------------------------------------------------------------
# scene assembly and JSON
# ---------------------------------------------------------------------------

def synthetic_masks(size=160):
    masks = {c: np.zeros((size, size), bool) for c in CATEGORIES}
    masks["building"][20:41, 20:51] = True
    yy, xx = np.mgrid[0:size, 0:size]
    masks["water"] |= (xx - 110) ** 2 + (yy - 40) ** 2 <= 25**2
    masks["road"][100:103, 10:150] = True
    masks["plant"][(xx - 40) ** 2 + (yy - 120) ** 2 <= 9] = True
    masks["plant"][(xx - 60) ** 2 + (yy - 120) ** 2 <= 9] = True
    return [mask_from_bool(c, masks[c]) for c in CATEGORIES]


def test_assemble_scene_counts():
    scene = assemble_scene(synthetic_masks(), ExtractionParams(), scale=1.0)
    assert len(scene.buildings) == 1
    assert len([r for r in scene.regions if r.category == "water"]) == 1
    road = next(c for c in scene.centerlines if c.category == "road")
    assert len(road.paths) == 1
    assert len(scene.plantings.singles) == 2
    assert len(scene.plantings.clusters) == 0


def test_assemble_scene_empty_masks():
    scene = assemble_scene(empty_masks(), ExtractionParams())
    assert scene.buildings == [] and scene.regions == []
    assert all(c.paths == [] for c in scene.centerlines)
    assert scene.plantings.singles == [] and scene.plantings.clusters == []


def test_assemble_scene_coordinates_in_bounds():
    scene = assemble_scene(synthetic_masks(), ExtractionParams())
    w, h = scene.width, scene.height
    for r in scene.regions:
        for arr in (r.polygon, r.smooth_samples):
            assert arr[:, 0].min() >= 0 and arr[:, 0].max() <= w
            assert arr[:, 1].min() >= 0 and arr[:, 1].max() <= h
    for c in scene.centerlines:
        for p in c.paths:
            assert p[:, 0].min() >= 0 and p[:, 0].max() <= w


def test_assemble_scene_missing_mask():
    masks = synthetic_masks()[:-1]
    with pytest.raises(ValidationError) as err:
        assemble_scene(masks)
    assert "plant" in str(err.value)


def test_assemble_scene_dimension_mismatch():
    masks = synthetic_masks()
    masks[0] = CategoryMask("green_space", np.zeros((8, 8), np.uint8))
    with pytest.raises(ValidationError):
        assemble_scene(masks)


def test_assemble_scene_deterministic():
    a = scene_to_dict(assemble_scene(synthetic_masks(), ExtractionParams()))
    b = scene_to_dict(assemble_scene(synthetic_masks(), ExtractionParams()))
    assert json.dumps(a) == json.dumps(b)


def test_scene_json_round_trip(tmp_path):
    scene = assemble_scene(synthetic_masks(), ExtractionParams(), scale=0.5)
    path = save_scene_json(scene, tmp_path / "scene.json")
    again = load_scene_json(path)
    assert json.dumps(scene_to_dict(again)) == json.dumps(scene_to_dict(scene))


def test_scene_schema_rejects_bad_category():
    scene = assemble_scene(empty_masks(), ExtractionParams())
    data = scene_to_dict(scene)
    data["centerlines"][0]["category"] = "boulevard"
    with pytest.raises(ValidationError) as err:
        validate_scene_dict(data)
    assert "/centerlines/0" in str(err.value)


def test_scene_schema_rejects_missing_field():
    data = scene_to_dict(assemble_scene(empty_masks(), ExtractionParams()))
    del data["scale"]
    with pytest.raises(ValidationError):
        scene_from_dict(data)


def test_extraction_params_validation():
    with pytest.raises(ValidationError):
        ExtractionParams(epsilon=0.0).validate()
    with pytest.raises(ValidationError):
        ExtractionParams(stride=0).validate()
    ExtractionParams().validate()
