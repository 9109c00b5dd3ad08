"""Procedural 3D generation: one builder per landscape element category.

World frame: x east, y north (image y negated), z up, meters, origin at
the image top-left.  All randomness flows from counter-based substreams
keyed by (seed, category, element index), so builds are deterministic
and order independent.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .errors import ValidationError
from .geometry import (
    dedupe_consecutive,
    ear_clip,
    is_simple_polygon,
    offset_polyline,
    point_in_polygon,
    points_in_polygon,
    points_to_ring_distance,
    polygon_area,
    polygon_signed_area,
)
from .meshes import Mesh3D, TerrainField, make_cylinder, make_icosphere, make_prism, merge_meshes
from .palette import CATEGORIES, DEFAULT_COLORS
from .vectorscene import BuildingFootprint, Centerline, PlantingPlan, RegionOutline, VectorScene

log = logging.getLogger(__name__)

CATEGORY_ORDER = CATEGORIES
CATEGORY_COLORS = dict(DEFAULT_COLORS)

PAVEMENT_Z = 0.02
ROAD_Z = 0.01
TRUNK_RADIUS = 0.15
TRUNK_HEIGHT = 2.0
DEFAULT_GRID_SPACING = 2.0

_MASK64 = (1 << 64) - 1


@dataclass
class BuildConfig:
    """Every tunable of the 3D stage, with conservative defaults."""

    seed: int = 0
    building_height_range: tuple[float, float] = (3.0, 15.0)
    road_width: float = 3.0
    city_road_width: float = 12.0
    terrain_amplitude: float = 3.0
    terrain_exponent: float = 1.5
    terrain_jitter: float = 0.2
    tree_density: float = 0.02
    canopy_height_range: tuple[float, float] = (2.0, 5.0)
    drape: bool = False

    def validate(self) -> None:
        if not (0 <= int(self.seed) < (1 << 64)):
            raise ValidationError("build.seed must fit in an unsigned 64-bit integer")
        for name in ("building_height_range", "canopy_height_range"):
            lo, hi = getattr(self, name)
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise ValidationError(f"build.{name} must satisfy min <= max")
        if self.road_width <= 0 or self.city_road_width <= 0:
            raise ValidationError("road widths must be positive")
        if self.terrain_amplitude < 0:
            raise ValidationError("build.terrain_amplitude must be >= 0")
        if not (0 <= self.terrain_jitter < 1):
            raise ValidationError("build.terrain_jitter must be in [0, 1)")
        if self.tree_density <= 0:
            raise ValidationError("build.tree_density must be > 0")


@dataclass
class Scene3D:
    """Category-tagged meshes plus the terrain fields that produced them."""

    meshes: list[Mesh3D] = field(default_factory=list)
    terrain_fields: list[TerrainField] = field(default_factory=list)


def substream(seed: int, category: str, index: int) -> np.random.Generator:
    """Independent counter-based stream per (seed, category, element)."""
    code = CATEGORY_ORDER.index(category)
    key = (int(seed) & _MASK64) | ((((index << 8) | code) & _MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key))


def world_xy(points_px: np.ndarray, scale: float) -> np.ndarray:
    pts = np.asarray(points_px, dtype=np.float64)
    return np.column_stack([pts[:, 0] * scale, -pts[:, 1] * scale])


def _ccw_world(ring: np.ndarray) -> np.ndarray:
    # world frame is y-up, so counter-clockwise means positive shoelace
    if polygon_signed_area(ring) < 0:
        return ring[::-1].copy()
    return ring


# ---------------------------------------------------------------------------
# element builders
# ---------------------------------------------------------------------------

def build_building(
    fp: BuildingFootprint, cfg: BuildConfig, rng: np.random.Generator, scale: float = 1.0
) -> Mesh3D:
    """Extrude the footprint to a random height from the configured range."""
    ring = _ccw_world(world_xy(fp.corners, scale))
    lo, hi = cfg.building_height_range
    height = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
    return make_prism(ring, 0.0, height, "building", CATEGORY_COLORS["building"])


def build_pavement(region: RegionOutline, scale: float = 1.0, region_index=None) -> Mesh3D:
    """Flat ear-clipped surface slightly above ground."""
    ring = dedupe_consecutive(world_xy(region.smooth_samples, scale))
    label = f"pavement region {region_index}" if region_index is not None else "pavement region"
    if len(ring) < 3:
        raise ValidationError(f"{label}: outline has fewer than 3 distinct points")
    if not is_simple_polygon(ring):
        raise ValidationError(f"{label}: outline self-intersects")
    ring = _ccw_world(ring)
    triangles = ear_clip(ring)
    vertices = np.column_stack([ring, np.full(len(ring), PAVEMENT_Z)])
    return Mesh3D("pavement", vertices, triangles, CATEGORY_COLORS["pavement"])


def build_terrain(
    region: RegionOutline,
    sign: int,
    cfg: BuildConfig,
    rng: np.random.Generator,
    scale: float = 1.0,
    grid_spacing: float = DEFAULT_GRID_SPACING,
) -> TerrainField:
    """Sample the region on a regular grid and shape it by boundary distance.

    z = sign * amplitude * (d / d_max)^exponent * (1 + jitter * u) with u
    uniform in [-1, 1]; boundary vertices stay at z = 0 exactly.  Regions
    too small to hold a grid point come back as a flat triangle fan.
    """
    if sign not in (-1, 1):
        raise ValidationError("terrain sign must be +1 or -1")
    category = region.category
    color = CATEGORY_COLORS.get(category, (128, 128, 128))
    ring = dedupe_consecutive(world_xy(region.smooth_samples, scale))
    if len(ring) < 3:
        raise ValidationError(f"{category} region outline has fewer than 3 distinct points")
    ring = _ccw_world(ring)

    xmin, ymin = ring.min(axis=0)
    xmax, ymax = ring.max(axis=0)
    xs = np.arange(xmin + grid_spacing / 2, xmax, grid_spacing)
    ys = np.arange(ymin + grid_spacing / 2, ymax, grid_spacing)
    interior = np.zeros((0, 2))
    if len(xs) and len(ys):
        gx, gy = np.meshgrid(xs, ys)
        candidates = np.column_stack([gx.ravel(), gy.ravel()])
        inside = points_in_polygon(candidates, ring)
        # keep grid points strictly off the boundary so the ring alone carries z = 0
        if inside.any():
            close = points_to_ring_distance(candidates[inside], ring) < 1e-9
            interior = candidates[inside][~close]

    flat_fan = len(interior) == 0
    triangles = None
    if not flat_fan:
        points = np.vstack([ring, interior])
        try:
            delaunay = Delaunay(points)
        except QhullError:
            flat_fan = True
        else:
            simplices = delaunay.simplices
            centroids = points[simplices].mean(axis=1)
            keep = points_in_polygon(centroids, ring)
            simplices = simplices[keep]
            if len(simplices) == 0:
                flat_fan = True
            else:
                used = np.unique(simplices)
                remap = -np.ones(len(points), dtype=np.int64)
                remap[used] = np.arange(len(used))
                vertices_xy = points[used]
                triangles = remap[simplices]
                boundary = remap[np.arange(len(ring))]
                boundary = boundary[boundary >= 0]

    if flat_fan:
        vertices_xy = ring
        triangles = np.asarray(
            [(0, i, i + 1) for i in range(1, len(ring) - 1)], dtype=np.int64
        )
        boundary = np.arange(len(ring), dtype=np.int64)

    distance = points_to_ring_distance(vertices_xy, ring)
    distance[boundary] = 0.0
    d_max = float(distance.max())
    if d_max > 0 and cfg.terrain_amplitude > 0 and not flat_fan:
        jitter_u = rng.uniform(-1.0, 1.0, size=len(vertices_xy))
        z = (
            sign
            * cfg.terrain_amplitude
            * (distance / d_max) ** cfg.terrain_exponent
            * (1.0 + cfg.terrain_jitter * jitter_u)
        )
        z[boundary] = 0.0
    else:
        z = np.zeros(len(vertices_xy))

    # orient faces counter-clockwise in xy so normals point up; drop slivers
    vertices = np.column_stack([vertices_xy, z])
    a, b, c = (vertices_xy[triangles[:, k]] for k in range(3))
    cross = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    solid = np.abs(cross) > 2e-9
    triangles, cross = triangles[solid], cross[solid]
    triangles[cross < 0] = triangles[cross < 0][:, ::-1]

    mesh = Mesh3D(category, vertices, triangles, color)
    return TerrainField(mesh, np.asarray(sorted(map(int, boundary))), distance, sign)


def _terrain_z_at(terrain_fields, x: float, y: float) -> float:
    for fld in terrain_fields:
        v = fld.mesh.vertices
        for i, j, k in fld.mesh.triangles:
            ax, ay = v[i, 0], v[i, 1]
            d = (v[j, 1] - v[k, 1]) * (ax - v[k, 0]) + (v[k, 0] - v[j, 0]) * (ay - v[k, 1])
            if d == 0.0:
                continue
            w1 = ((v[j, 1] - v[k, 1]) * (x - v[k, 0]) + (v[k, 0] - v[j, 0]) * (y - v[k, 1])) / d
            w2 = ((v[k, 1] - v[i, 1]) * (x - v[k, 0]) + (v[i, 0] - v[k, 0]) * (y - v[k, 1])) / d
            w3 = 1.0 - w1 - w2
            if w1 >= -1e-9 and w2 >= -1e-9 and w3 >= -1e-9:
                return float(w1 * v[i, 2] + w2 * v[j, 2] + w3 * v[k, 2])
    return 0.0


def build_road(
    cl: Centerline, cfg: BuildConfig, scale: float = 1.0, terrain_fields=None
) -> Mesh3D:
    """Offset each centerline path into an equal-width ribbon.

    Garden paths use road_width, city roads city_road_width.  Without
    drape the ribbon floats at a constant z, reproducing overlaps where
    terrain rises; with drape the underlying terrain z is added.
    """
    width = cfg.city_road_width if cl.category == "city_road" else cfg.road_width
    ribbons = []
    for idx, path in enumerate(cl.paths):
        pts = dedupe_consecutive(world_xy(path, scale), closed=False)
        if len(pts) < 2:
            log.warning("%s path %d has fewer than 2 distinct points; skipped", cl.category, idx)
            continue
        left, right = offset_polyline(pts, width / 2.0)
        n = len(left)
        if cfg.drape and terrain_fields:
            zs_l = np.array([_terrain_z_at(terrain_fields, x, y) for x, y in left])
            zs_r = np.array([_terrain_z_at(terrain_fields, x, y) for x, y in right])
        else:
            zs_l = np.zeros(n)
            zs_r = np.zeros(n)
        vertices = np.vstack(
            [
                np.column_stack([left, ROAD_Z + zs_l]),
                np.column_stack([right, ROAD_Z + zs_r]),
            ]
        )
        triangles = []
        for i in range(n - 1):
            li, ri, lj, rj = i, n + i, i + 1, n + i + 1
            triangles.append((li, ri, rj))
            triangles.append((li, rj, lj))
        ribbons.append(
            Mesh3D(cl.category, vertices, np.asarray(triangles, dtype=np.int64), CATEGORY_COLORS[cl.category])
        )
    return merge_meshes(ribbons, cl.category, CATEGORY_COLORS[cl.category])


def cluster_interior_points(
    ring_world: np.ndarray,
    count: int,
    rng: np.random.Generator,
    min_spacing: float = 2.0,
    max_failures: int = 100,
) -> np.ndarray:
    """Rejection-sample `count` points inside the ring.

    The mutual spacing constraint halves after max_failures consecutive
    rejections, so dense targets still terminate.
    """
    xmin, ymin = ring_world.min(axis=0)
    xmax, ymax = ring_world.max(axis=0)
    spacing = min_spacing
    failures = 0
    points: list[np.ndarray] = []
    while len(points) < count:
        p = rng.uniform((xmin, ymin), (xmax, ymax))
        ok = point_in_polygon(p, ring_world) and all(
            np.hypot(*(p - q)) >= spacing for q in points
        )
        if ok:
            points.append(p)
            failures = 0
        else:
            failures += 1
            if failures >= max_failures:
                spacing /= 2.0
                failures = 0
    return np.asarray(points).reshape(-1, 2)


def _tree_mesh(center_xy, canopy_radius: float) -> Mesh3D:
    color = CATEGORY_COLORS["plant"]
    trunk = make_cylinder(center_xy, TRUNK_RADIUS, 0.0, TRUNK_HEIGHT, "plant", color)
    canopy = make_icosphere(
        (center_xy[0], center_xy[1], TRUNK_HEIGHT + canopy_radius), canopy_radius, "plant", color
    )
    return merge_meshes([trunk, canopy], "plant", color)


def build_plantings(
    plan: PlantingPlan, cfg: BuildConfig, scale: float = 1.0, seed: int | None = None
) -> list[Mesh3D]:
    """One tree mesh (trunk + canopy) per planting.

    Singles keep their recorded canopy radius.  Clusters get
    max(1, round(area_m2 * tree_density)) interior trees plus trees on
    the recorded outline points; their canopy diameters are drawn from
    canopy_height_range.
    """
    seed = cfg.seed if seed is None else seed
    trees = []
    for marker in plan.singles:
        cx, cy = marker.center[0] * scale, -marker.center[1] * scale
        trees.append(_tree_mesh((cx, cy), marker.radius * scale))

    lo, hi = cfg.canopy_height_range
    for j, cluster in enumerate(plan.clusters):
        rng = substream(seed, "plant", len(plan.singles) + j)
        ring = dedupe_consecutive(world_xy(cluster.outline, scale))
        if len(ring) < 3:
            continue
        area = polygon_area(ring)
        count = max(1, round(area * cfg.tree_density))
        interior = cluster_interior_points(ring, count, rng)
        outline_pts = world_xy(cluster.points, scale)
        for p in np.vstack([interior, outline_pts]):
            canopy = float(rng.uniform(lo, hi)) if hi > lo else float(lo)
            trees.append(_tree_mesh((p[0], p[1]), canopy / 2.0))
    return trees


# ---------------------------------------------------------------------------
# whole-scene assembly
# ---------------------------------------------------------------------------

def build_terrain_fields(scene: VectorScene, cfg: BuildConfig) -> list[TerrainField]:
    """Terrain for green space (raised) and water (sunken), in scene order."""
    fields = []
    for category, sign in (("green_space", 1), ("water", -1)):
        regions = [r for r in scene.regions if r.category == category]
        for i, region in enumerate(regions):
            rng = substream(cfg.seed, category, i)
            fields.append(build_terrain(region, sign, cfg, rng, scene.scale))
    return fields


def build_scene3d(scene: VectorScene, cfg: BuildConfig) -> Scene3D:
    """Run every builder in fixed category order with seeded substreams."""
    cfg.validate()
    out = Scene3D()
    out.terrain_fields = build_terrain_fields(scene, cfg)
    terrain_by_category: dict[str, list[Mesh3D]] = {"green_space": [], "water": []}
    for fld in out.terrain_fields:
        terrain_by_category[fld.mesh.category].append(fld.mesh)

    for category in CATEGORY_ORDER:
        if category in ("green_space", "water"):
            out.meshes.extend(terrain_by_category[category])
        elif category in ("road", "city_road"):
            for cl in scene.centerlines:
                if cl.category != category:
                    continue
                mesh = build_road(
                    cl, cfg, scene.scale,
                    terrain_fields=out.terrain_fields if cfg.drape else None,
                )
                out.meshes.append(mesh)
        elif category == "pavement":
            pavements = [r for r in scene.regions if r.category == "pavement"]
            for i, region in enumerate(pavements):
                out.meshes.append(build_pavement(region, scene.scale, region_index=i))
        elif category == "building":
            for i, fp in enumerate(scene.buildings):
                rng = substream(cfg.seed, "building", i)
                out.meshes.append(build_building(fp, cfg, rng, scene.scale))
        elif category == "red_line":
            continue  # site boundary: recorded in the scene, never built
        elif category == "plant":
            out.meshes.extend(build_plantings(scene.plantings, cfg, scene.scale))
    out.meshes = [m for m in out.meshes if len(m.triangles) > 0]
    for mesh in out.meshes:
        mesh.validate()
    return out


def assemble_and_export(scene: VectorScene, cfg: BuildConfig, out_dir, stem: str = "scene"):
    """Build all meshes and write glTF + OBJ next to each other."""
    from .export import export_scene

    scene3d = build_scene3d(scene, cfg)
    files = export_scene(scene3d, out_dir, stem=stem)
    return scene3d, files
