"""Shared fixtures: synthetic plans with known ground truth."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pytest
from PIL import Image

from parkforge.palette import DEFAULT_COLORS
from parkforge.raster import RasterPlan


@dataclass
class PlanTruth:
    """Ground truth of the synthetic round-trip plan (pixel coordinates)."""

    building_rect: tuple[int, int, int, int]  # x0, y0, x1, y1 inclusive
    lake_polygon: np.ndarray
    road_y: float
    road_x_range: tuple[int, int]
    tree_centers: list[tuple[float, float]]
    pavement_rect: tuple[int, int, int, int]
    cluster_center: tuple[float, float]
    counts: dict[str, int] = field(default_factory=dict)


def paint_disc(img: np.ndarray, cx: float, cy: float, r: float, color) -> None:
    yy, xx = np.mgrid[0 : img.shape[0], 0 : img.shape[1]]
    img[(xx - cx) ** 2 + (yy - cy) ** 2 <= r * r] = color


def paint_polygon(img: np.ndarray, ring: np.ndarray, color) -> None:
    from parkforge.geometry import points_in_polygon

    yy, xx = np.mgrid[0 : img.shape[0], 0 : img.shape[1]]
    pts = np.column_stack([xx.ravel(), yy.ravel()]).astype(float)
    inside = points_in_polygon(pts, ring).reshape(img.shape[:2])
    img[inside] = color


def hexagon(cx: float, cy: float, r: float) -> np.ndarray:
    angles = np.radians([0, 60, 120, 180, 240, 300])
    return np.column_stack([cx + r * np.cos(angles), cy + r * np.sin(angles)])


def build_roundtrip_plan() -> tuple[RasterPlan, PlanTruth]:
    """256x256 plan exercising every category, with exactly known geometry."""
    size = 256
    img = np.zeros((size, size, 3), dtype=np.uint8)
    img[:] = DEFAULT_COLORS["green_space"]

    truth = PlanTruth(
        building_rect=(40, 40, 80, 70),
        lake_polygon=hexagon(170.0, 80.0, 30.0),
        road_y=200.0,
        road_x_range=(20, 236),
        tree_centers=[(50.0, 140.0), (80.0, 150.0), (110.0, 140.0), (140.0, 150.0), (170.0, 140.0)],
        pavement_rect=(30, 120, 90, 170),
        cluster_center=(60.0, 230.0),
    )

    x0, y0, x1, y1 = truth.building_rect
    img[y0 : y1 + 1, x0 : x1 + 1] = DEFAULT_COLORS["building"]
    paint_polygon(img, truth.lake_polygon, DEFAULT_COLORS["water"])
    img[199:202, 20:237] = DEFAULT_COLORS["road"]
    px0, py0, px1, py1 = truth.pavement_rect
    img[py0 : py1 + 1, px0 : px1 + 1] = DEFAULT_COLORS["pavement"]
    for cx, cy in truth.tree_centers:
        paint_disc(img, cx, cy, 3.0, DEFAULT_COLORS["plant"])

    # planting cluster: ellipse well clear of the single trees
    yy, xx = np.mgrid[0:size, 0:size]
    ellipse = ((xx - truth.cluster_center[0]) / 15.0) ** 2 + (
        (yy - truth.cluster_center[1]) / 8.0
    ) ** 2 <= 1.0
    img[ellipse] = DEFAULT_COLORS["plant"]

    # city road: vertical bar kept clear of the garden road and the border ring
    img[4:252, 240:245] = DEFAULT_COLORS["city_road"]

    # site boundary ring, painted last so it stays intact
    img[0:2, :] = DEFAULT_COLORS["red_line"]
    img[254:256, :] = DEFAULT_COLORS["red_line"]
    img[:, 0:2] = DEFAULT_COLORS["red_line"]
    img[:, 254:256] = DEFAULT_COLORS["red_line"]

    for name, color in DEFAULT_COLORS.items():
        truth.counts[name] = int((img == np.array(color, dtype=np.uint8)).all(axis=2).sum())
    return RasterPlan(img, scale=1.0), truth


def build_two_region_plan(noise_fraction: float = 0.0, seed: int = 42):
    """64x64 plan: left pavement, right green space, optional impulse noise.

    Returns (noisy plan, clean plan, flipped (y, x) index arrays).
    """
    size = 64
    clean = np.zeros((size, size, 3), dtype=np.uint8)
    clean[:, : size // 2] = DEFAULT_COLORS["pavement"]
    clean[:, size // 2 :] = DEFAULT_COLORS["green_space"]
    noisy = clean.copy()
    ys = xs = np.zeros(0, dtype=np.int64)
    if noise_fraction > 0:
        rng = np.random.default_rng(seed)
        n_flip = int(noise_fraction * size * size)
        idx = rng.choice(size * size, n_flip, replace=False)
        ys, xs = idx // size, idx % size
        noisy[ys, xs] = rng.integers(0, 256, (n_flip, 3), dtype=np.uint8)
    return RasterPlan(noisy), RasterPlan(clean), ys, xs


def star_polygon(rng, n: int, rmin: float, rmax: float, center=(0.0, 0.0)) -> np.ndarray:
    """Random simple polygon: angular gaps below pi guarantee simplicity."""
    angles = 2.0 * np.pi * (np.arange(n) + rng.uniform(0.1, 0.9, n)) / n
    radii = rng.uniform(rmin, rmax, n)
    return np.column_stack(
        [center[0] + radii * np.cos(angles), center[1] + radii * np.sin(angles)]
    )


def mask_from_bool(category: str, fg: np.ndarray):
    from parkforge.segmentation import CategoryMask

    return CategoryMask(category, np.where(fg, 255, 0).astype(np.uint8))


def empty_masks(size: int = 32):
    from parkforge.palette import CATEGORIES

    return [mask_from_bool(c, np.zeros((size, size), dtype=bool)) for c in CATEGORIES]


def save_png(plan: RasterPlan, path) -> str:
    Image.fromarray(plan.pixels, mode="RGB").save(path, format="PNG")
    return str(path)


@pytest.fixture(scope="session")
def roundtrip_plan() -> tuple[RasterPlan, PlanTruth]:
    return build_roundtrip_plan()


@pytest.fixture(scope="session")
def roundtrip_png(roundtrip_plan, tmp_path_factory):
    plan, _ = roundtrip_plan
    path = tmp_path_factory.mktemp("fixtures") / "plan.png"
    save_png(plan, path)
    return path
