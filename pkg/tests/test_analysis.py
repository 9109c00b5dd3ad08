import numpy as np
import pytest

import oracles
from conftest import star_polygon
from parkforge.analysis import (
    drainage_overlay,
    elevation_overlay,
    face_slopes_deg,
    local_minima,
    slope_overlay,
    steepest_descent_accumulation,
)
from parkforge.builders import BuildConfig, build_terrain, substream
from parkforge.meshes import Mesh3D, TerrainField, face_centroids, face_normals
from parkforge.vectorscene import RegionOutline
from test_builders import circle_region


def cone_mesh(slope_deg: float, radius: float = 20.0, segments: int = 64) -> Mesh3D:
    """Open cone: apex above the origin, flank faces at the given slope."""
    apex_z = radius * np.tan(np.radians(slope_deg))
    angles = np.linspace(0, 2 * np.pi, segments, endpoint=False)
    ring = np.column_stack([radius * np.cos(angles), radius * np.sin(angles), np.zeros(segments)])
    vertices = np.vstack([[0.0, 0.0, apex_z], ring])
    triangles = [(0, 1 + i, 1 + (i + 1) % segments) for i in range(segments)]
    return Mesh3D("green_space", vertices, np.asarray(triangles), (0, 128, 0))


def grid_mesh(z_fn, extent: float = 10.0, n: int = 8, category="green_space") -> Mesh3D:
    xs = np.linspace(0, extent, n)
    ys = np.linspace(0, extent, n)
    gx, gy = np.meshgrid(xs, ys)
    verts = np.column_stack([gx.ravel(), gy.ravel(), z_fn(gx.ravel(), gy.ravel())])
    tris = []
    for r in range(n - 1):
        for c in range(n - 1):
            a = r * n + c
            tris.append((a, a + 1, a + n))
            tris.append((a + 1, a + n + 1, a + n))
    return Mesh3D(category, verts, np.asarray(tris), (0, 128, 0))


def field_from_mesh(mesh: Mesh3D, sign: int = 1) -> TerrainField:
    return TerrainField(mesh, np.zeros(0, dtype=np.int64), np.zeros(len(mesh.vertices)), sign)


def disc_field(seed=5, amplitude=3.0, exponent=1.0, jitter=0.0, sign=1, category="green_space"):
    cfg = BuildConfig(
        seed=seed, terrain_amplitude=amplitude, terrain_exponent=exponent, terrain_jitter=jitter
    )
    region = circle_region(category, 30, 30, 20)
    return build_terrain(region, sign, cfg, substream(seed, category, 0))


# ---------------------------------------------------------------------------
# elevation
# ---------------------------------------------------------------------------

def test_elevation_flat_terrain_degenerate_ramp():
    field = disc_field(amplitude=0.0)
    overlay = elevation_overlay([field])
    assert (overlay.per_face == 0.0).all()
    assert overlay.value_min == overlay.value_max == 0.0
    assert overlay.bin_counts.sum() == overlay.face_count
    assert overlay.bin_counts[1] == overlay.face_count  # pinned to the middle


def test_elevation_max_face_contains_max_vertex():
    field = disc_field(amplitude=3.0, exponent=1.0)
    overlay = elevation_overlay([field])
    top_face = int(np.argmax(overlay.per_face))
    top_vertex = int(np.argmax(field.mesh.vertices[:, 2]))
    assert top_vertex in field.mesh.triangles[top_face]


def test_elevation_green_plus_water_straddles_zero():
    green = disc_field(seed=2, sign=1)
    water = disc_field(seed=3, sign=-1, category="water")
    overlay = elevation_overlay([green, water])
    assert overlay.value_min < 0.0 < overlay.value_max
    assert overlay.face_count == len(green.mesh.triangles) + len(water.mesh.triangles)


def test_elevation_minmax_within_face_averaging():
    field = disc_field(jitter=0.2)
    overlay = elevation_overlay([field])
    v = field.mesh.vertices
    z_spread = max(
        v[t][:, 2].max() - v[t][:, 2].min() for t in field.mesh.triangles
    )
    assert v[:, 2].max() - overlay.value_max <= z_spread + 1e-12
    assert overlay.value_min - v[:, 2].min() <= z_spread + 1e-12


# ---------------------------------------------------------------------------
# slope
# ---------------------------------------------------------------------------

def test_slope_horizontal_face_bin_zero():
    mesh = Mesh3D("pavement", np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], float), [[0, 1, 2]], (0, 0, 0))
    overlay = slope_overlay([mesh])
    assert overlay.per_face.tolist() == [0]
    assert overlay.bin_counts.tolist() == [1, 0, 0, 0, 0]


def test_slope_30_degree_cone_lands_in_third_bin():
    overlay = slope_overlay([cone_mesh(30.0)])
    assert (overlay.per_face == 2).all()


def test_slope_exactly_five_degrees_lower_inclusive():
    t = np.tan(np.radians(5.0))
    mesh = Mesh3D(
        "green_space", np.array([[0, 0, 0], [1, 0, t], [0, 1, 0]], float), [[0, 1, 2]], (0, 0, 0)
    )
    assert face_slopes_deg(mesh)[0] == pytest.approx(5.0, abs=1e-9)
    overlay = slope_overlay([mesh])
    assert overlay.per_face.tolist() == [1]


def test_slope_bins_partition_everything():
    rng = np.random.default_rng(4)
    mesh = grid_mesh(lambda x, y: rng.uniform(0, 6, x.shape))
    overlay = slope_overlay([mesh])
    assert overlay.bin_counts.sum() == overlay.face_count
    assert ((overlay.per_face >= 0) & (overlay.per_face <= 4)).all()


# ---------------------------------------------------------------------------
# drainage
# ---------------------------------------------------------------------------

def test_drainage_flat_zero_vectors_unit_accumulation():
    mesh = grid_mesh(lambda x, y: np.zeros_like(x))
    overlay = drainage_overlay([field_from_mesh(mesh)])
    assert np.allclose(overlay.per_face, 0.0)
    assert np.allclose(overlay.accumulation, 1.0)


def test_drainage_planar_ramp_uniform_flow():
    mesh = grid_mesh(lambda x, y: 0.5 * x)  # descends toward -x
    overlay = drainage_overlay([field_from_mesh(mesh)])
    assert np.abs(overlay.per_face - np.array([-1.0, 0.0])).max() <= 1e-6


def test_drainage_bowl_concentrates_at_bottom():
    mesh = grid_mesh(lambda x, y: ((x - 5.0) ** 2 + (y - 5.0) ** 2) / 10.0)
    overlay = drainage_overlay([field_from_mesh(mesh, sign=-1)])
    centroids = face_centroids(mesh)
    deepest = int(np.argmin(centroids[:, 2]))
    assert overlay.accumulation[deepest] == overlay.accumulation.max()
    # oracle: walk every face's descent chain to its terminal minimum
    downslope, acc = steepest_descent_accumulation(mesh)
    mass = oracles.brute_drainage_mass(centroids[:, 2], downslope)
    for face, expected in mass.items():
        assert acc[face] == pytest.approx(expected)


def test_drainage_conservation_and_flow_invariants():
    field = disc_field(jitter=0.2, seed=21)
    mesh = field.mesh
    downslope, acc = steepest_descent_accumulation(mesh)
    minima = local_minima(mesh)
    assert acc[minima].sum() == pytest.approx(len(mesh.triangles))

    overlay = drainage_overlay([field])
    normals = face_normals(mesh)
    dots = np.einsum("ij,ij->i", overlay.flow3d, normals)
    assert np.abs(dots).max() <= 1e-6  # flow lies in the face plane
    assert (overlay.flow3d[:, 2] <= 1e-12).all()  # never uphill
