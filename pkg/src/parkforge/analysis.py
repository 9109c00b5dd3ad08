"""Elevation, slope, and drainage overlays over the generated terrain.

All analyses are face-based.  Slope bins are lower-inclusive on the
boundary angles 0, 5, 19, 45, 65 degrees, with a residual bin up to 90.
Drainage routes each face's unit weight to its steepest downslope
edge-neighbor until a local minimum, conserving total mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .meshes import Mesh3D, TerrainField, face_centroids, face_normals

SLOPE_BIN_EDGES = (0.0, 5.0, 19.0, 45.0, 65.0, 90.0)
SLOPE_BIN_COLORS = (
    (56, 168, 0),
    (255, 221, 0),
    (255, 153, 0),
    (230, 57, 0),
    (128, 0, 128),
)
SLOPE_BIN_LABELS = ("0-5 deg", "5-19 deg", "19-45 deg", "45-65 deg", "65-90 deg")

ELEVATION_LOW = (0, 0, 255)
ELEVATION_HIGH = (255, 0, 0)
ELEVATION_MID = (128, 0, 128)

DRAINAGE_LOW = (220, 235, 250)
DRAINAGE_HIGH = (8, 48, 107)

# lower-inclusive binning would misplace boundary angles hit with float
# round-off, so angles snap to a 1e-9 degree grid first
_ANGLE_SNAP = 1e-9


@dataclass
class AnalysisOverlay:
    """Per-face analysis results plus everything needed to render them.

    per_face holds scalars (elevation, meters), bin indices (slope), or
    (F, 2) unit flow vectors (drainage).  triangles_xy are world-space
    face footprints; bounds is the overlay extent (xmin, ymin, xmax, ymax).
    """

    kind: str
    triangles_xy: np.ndarray
    per_face: np.ndarray
    legend: list[tuple[str, tuple[int, int, int]]]
    bounds: tuple[float, float, float, float]
    bin_counts: np.ndarray
    value_min: float = 0.0
    value_max: float = 0.0
    accumulation: np.ndarray | None = None
    flow3d: np.ndarray | None = None

    @property
    def face_count(self) -> int:
        return len(self.triangles_xy)


def _gather_faces(meshes: list[Mesh3D]):
    tris, zmeans = [], []
    for mesh in meshes:
        if len(mesh.triangles) == 0:
            continue
        corners = mesh.vertices[mesh.triangles]
        tris.append(corners[:, :, :2])
        zmeans.append(corners[:, :, 2].mean(axis=1))
    if not tris:
        return np.zeros((0, 3, 2)), np.zeros(0)
    return np.vstack(tris), np.concatenate(zmeans)


def _bounds_of(triangles_xy: np.ndarray, fallback) -> tuple[float, float, float, float]:
    if len(triangles_xy) == 0:
        return fallback if fallback is not None else (0.0, 0.0, 0.0, 0.0)
    flat = triangles_xy.reshape(-1, 2)
    return (
        float(flat[:, 0].min()),
        float(flat[:, 1].min()),
        float(flat[:, 0].max()),
        float(flat[:, 1].max()),
    )


def elevation_overlay(fields: list[TerrainField], fallback_bounds=None) -> AnalysisOverlay:
    """Per-face mean z on a blue-to-red ramp; flat fields pin to mid-color."""
    tris, zmean = _gather_faces([f.mesh for f in fields])
    vmin = float(zmean.min()) if len(zmean) else 0.0
    vmax = float(zmean.max()) if len(zmean) else 0.0
    legend = [
        (f"z = {vmin:.2f} m", ELEVATION_LOW),
        (f"z = {(vmin + vmax) / 2.0:.2f} m", ELEVATION_MID),
        (f"z = {vmax:.2f} m", ELEVATION_HIGH),
    ]
    if len(zmean) and vmax > vmin:
        edges = np.linspace(vmin, vmax, 4)
        counts = np.histogram(zmean, bins=edges)[0]
    else:
        counts = np.zeros(3, dtype=np.int64)
        counts[1] = len(zmean)
    return AnalysisOverlay(
        kind="elevation",
        triangles_xy=tris,
        per_face=zmean,
        legend=legend,
        bounds=_bounds_of(tris, fallback_bounds),
        bin_counts=counts.astype(np.int64),
        value_min=vmin,
        value_max=vmax,
    )


def face_slopes_deg(mesh: Mesh3D) -> np.ndarray:
    """Face inclination: arccos(|n . z|) in degrees, snapped to 1e-9."""
    normals = face_normals(mesh)
    cos_tilt = np.clip(np.abs(normals[:, 2]), 0.0, 1.0)
    slopes = np.degrees(np.arccos(cos_tilt))
    return np.round(slopes / _ANGLE_SNAP) * _ANGLE_SNAP


def slope_overlay(meshes: list[Mesh3D], fallback_bounds=None) -> AnalysisOverlay:
    """Bin face slopes into the five human-perception intervals."""
    slopes = [face_slopes_deg(m) for m in meshes if len(m.triangles)]
    all_slopes = np.concatenate(slopes) if slopes else np.zeros(0)
    tris, _ = _gather_faces(meshes)
    bins = np.clip(
        np.searchsorted(SLOPE_BIN_EDGES[1:-1], all_slopes, side="right"),
        0,
        len(SLOPE_BIN_LABELS) - 1,
    )
    counts = np.bincount(bins, minlength=len(SLOPE_BIN_LABELS)).astype(np.int64)
    legend = list(zip(SLOPE_BIN_LABELS, SLOPE_BIN_COLORS))
    return AnalysisOverlay(
        kind="slope",
        triangles_xy=tris,
        per_face=bins.astype(np.int64),
        legend=legend,
        bounds=_bounds_of(tris, fallback_bounds),
        bin_counts=counts,
        value_min=float(all_slopes.min()) if len(all_slopes) else 0.0,
        value_max=float(all_slopes.max()) if len(all_slopes) else 0.0,
    )


def _face_adjacency(mesh: Mesh3D) -> list[list[int]]:
    edge_to_faces: dict[tuple[int, int], list[int]] = {}
    for f, (i, j, k) in enumerate(mesh.triangles):
        for a, b in ((i, j), (j, k), (k, i)):
            edge_to_faces.setdefault((int(min(a, b)), int(max(a, b))), []).append(f)
    neighbors: list[list[int]] = [[] for _ in range(len(mesh.triangles))]
    for faces in edge_to_faces.values():
        for f in faces:
            neighbors[f].extend(g for g in faces if g != f)
    return neighbors


def steepest_descent_accumulation(mesh: Mesh3D) -> tuple[np.ndarray, np.ndarray]:
    """Route unit weight per face to the lowest strictly-below neighbor.

    Returns (downslope face index or -1 at local minima, accumulation).
    Processing order is descending centroid z, so every upstream face is
    settled before its weight moves on.
    """
    centroids = face_centroids(mesh)
    z = centroids[:, 2]
    neighbors = _face_adjacency(mesh)
    downslope = np.full(len(z), -1, dtype=np.int64)
    for f, nbrs in enumerate(neighbors):
        below = [g for g in nbrs if z[g] < z[f]]
        if below:
            downslope[f] = min(below, key=lambda g: (z[g], g))
    accumulation = np.ones(len(z))
    for f in sorted(range(len(z)), key=lambda i: (-z[i], i)):
        if downslope[f] >= 0:
            accumulation[downslope[f]] += accumulation[f]
    return downslope, accumulation


def drainage_overlay(fields: list[TerrainField], fallback_bounds=None) -> AnalysisOverlay:
    """Per-face downhill direction plus steepest-descent flow accumulation."""
    tris_all, flows, flows3d, accs = [], [], [], []
    for fld in fields:
        mesh = fld.mesh
        if len(mesh.triangles) == 0:
            continue
        normals = face_normals(mesh)
        # project gravity onto each face plane: v = -z + (z . n) n
        v = -np.eye(3)[2] + normals[:, 2:3] * normals
        norm3 = np.linalg.norm(v, axis=1)
        unit3 = np.where(norm3[:, None] > 1e-12, v / np.where(norm3 == 0, 1, norm3)[:, None], 0.0)
        xy = v[:, :2]
        norm2 = np.hypot(xy[:, 0], xy[:, 1])
        unit2 = np.where(norm2[:, None] > 1e-12, xy / np.where(norm2 == 0, 1, norm2)[:, None], 0.0)
        _, acc = steepest_descent_accumulation(mesh)
        corners = mesh.vertices[mesh.triangles]
        tris_all.append(corners[:, :, :2])
        flows.append(unit2)
        flows3d.append(unit3)
        accs.append(acc)

    if tris_all:
        tris = np.vstack(tris_all)
        flow = np.vstack(flows)
        flow3d = np.vstack(flows3d)
        acc = np.concatenate(accs)
    else:
        tris = np.zeros((0, 3, 2))
        flow = np.zeros((0, 2))
        flow3d = np.zeros((0, 3))
        acc = np.zeros(0)

    amax = float(acc.max()) if len(acc) else 0.0
    legend = [
        ("accumulation 1", DRAINAGE_LOW),
        (f"accumulation {max(amax, 1.0) / 2.0:.0f}", _mix(DRAINAGE_LOW, DRAINAGE_HIGH, 0.5)),
        (f"accumulation {max(amax, 1.0):.0f}", DRAINAGE_HIGH),
    ]
    if len(acc):
        scaled = np.log1p(acc - 1.0) / max(np.log1p(max(amax - 1.0, 0.0)), 1e-12)
        counts = np.histogram(np.clip(scaled, 0, 1), bins=np.linspace(0, 1, 4))[0]
    else:
        counts = np.zeros(3, dtype=np.int64)
    return AnalysisOverlay(
        kind="drainage",
        triangles_xy=tris,
        per_face=flow,
        legend=legend,
        bounds=_bounds_of(tris, fallback_bounds),
        bin_counts=counts.astype(np.int64),
        value_min=float(acc.min()) if len(acc) else 0.0,
        value_max=amax,
        accumulation=acc,
        flow3d=flow3d,
    )


def _mix(a, b, t: float) -> tuple[int, int, int]:
    return tuple(int(round(a[i] + (b[i] - a[i]) * t)) for i in range(3))


def local_minima(mesh: Mesh3D) -> np.ndarray:
    downslope, _ = steepest_descent_accumulation(mesh)
    return np.nonzero(downslope < 0)[0]
