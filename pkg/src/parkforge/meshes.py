"""Triangle mesh containers and primitive constructors.

Meshes live in world meters: x east, y north, z up.  Vertices are
(N, 3) float64 arrays, triangles (M, 3) int64 index triples wound
counter-clockwise seen from outside/above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import ear_clip

DEGENERATE_AREA = 1e-9


@dataclass
class Mesh3D:
    category: str
    vertices: np.ndarray
    triangles: np.ndarray
    color: tuple[int, int, int]

    def __post_init__(self) -> None:
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)

    def validate(self) -> None:
        if not np.isfinite(self.vertices).all():
            raise ValidationError(f"{self.category} mesh has non-finite vertices")
        if len(self.triangles) and (
            self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)
        ):
            raise ValidationError(f"{self.category} mesh has out-of-range triangle indices")
        if len(self.triangles) and (face_areas(self) <= DEGENERATE_AREA).any():
            raise ValidationError(f"{self.category} mesh contains a degenerate triangle")


@dataclass
class TerrainField:
    """A terrain mesh plus the data that shaped it.

    boundary_vertices have z = 0 exactly; vertex_distance is each
    vertex's distance to the region boundary in meters; sign is +1 for
    raised ground and -1 for water.
    """

    mesh: Mesh3D
    boundary_vertices: np.ndarray
    vertex_distance: np.ndarray
    sign: int


def _corner_vectors(mesh: Mesh3D):
    v = mesh.vertices
    t = mesh.triangles
    return v[t[:, 0]], v[t[:, 1]], v[t[:, 2]]


def face_cross(mesh: Mesh3D) -> np.ndarray:
    a, b, c = _corner_vectors(mesh)
    return np.cross(b - a, c - a)


def face_areas(mesh: Mesh3D) -> np.ndarray:
    return 0.5 * np.linalg.norm(face_cross(mesh), axis=1)


def face_normals(mesh: Mesh3D) -> np.ndarray:
    cross = face_cross(mesh)
    norm = np.linalg.norm(cross, axis=1)
    norm = np.where(norm == 0.0, 1.0, norm)
    return cross / norm[:, None]


def face_centroids(mesh: Mesh3D) -> np.ndarray:
    a, b, c = _corner_vectors(mesh)
    return (a + b + c) / 3.0


def signed_volume(mesh: Mesh3D) -> float:
    """Divergence-theorem volume; exact for closed, consistently wound meshes."""
    a, b, c = _corner_vectors(mesh)
    return float(np.einsum("ij,ij->i", a, np.cross(b, c)).sum() / 6.0)


def edge_use_counts(mesh: Mesh3D) -> dict[tuple[int, int], int]:
    counts: dict[tuple[int, int], int] = {}
    for i, j, k in mesh.triangles:
        for a, b in ((i, j), (j, k), (k, i)):
            key = (int(min(a, b)), int(max(a, b)))
            counts[key] = counts.get(key, 0) + 1
    return counts


def merge_meshes(meshes: list[Mesh3D], category: str, color: tuple[int, int, int]) -> Mesh3D:
    vertices, triangles, offset = [], [], 0
    for m in meshes:
        vertices.append(m.vertices)
        triangles.append(m.triangles + offset)
        offset += len(m.vertices)
    if not vertices:
        return Mesh3D(category, np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64), color)
    return Mesh3D(category, np.vstack(vertices), np.vstack(triangles), color)


# ---------------------------------------------------------------------------
# primitives
# ---------------------------------------------------------------------------

def make_prism(base_ring: np.ndarray, z0: float, z1: float, category: str, color) -> Mesh3D:
    """Closed prism from a simple base ring extruded z0 -> z1.

    The ring must wind counter-clockwise (seen from above); caps are
    ear-clipped, sides are quads split into two triangles.
    """
    ring = np.asarray(base_ring, dtype=np.float64)
    n = len(ring)
    bottom = np.column_stack([ring, np.full(n, z0)])
    top = np.column_stack([ring, np.full(n, z1)])
    vertices = np.vstack([bottom, top])
    cap = ear_clip(ring)
    triangles = []
    for a, b, c in cap:
        triangles.append((a, c, b))          # bottom cap faces down
        triangles.append((n + a, n + b, n + c))  # top cap faces up
    for i in range(n):
        j = (i + 1) % n
        triangles.append((i, j, n + j))
        triangles.append((i, n + j, n + i))
    return Mesh3D(category, vertices, np.asarray(triangles, dtype=np.int64), color)


def make_cylinder(center_xy, radius: float, z0: float, z1: float, category: str, color, sides: int = 8) -> Mesh3D:
    angles = np.linspace(0.0, 2.0 * np.pi, sides, endpoint=False)
    ring = np.column_stack(
        [center_xy[0] + radius * np.cos(angles), center_xy[1] + radius * np.sin(angles)]
    )
    return make_prism(ring, z0, z1, category, color)


def make_icosphere(center, radius: float, category: str, color, subdivisions: int = 1) -> Mesh3D:
    """Icosahedron subdivided and projected onto the sphere (80 faces at 1)."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
            (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
            (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
        ],
        dtype=np.float64,
    )
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = np.asarray(verts[i]) + np.asarray(verts[j])
                m /= np.linalg.norm(m)
                cache[key] = len(verts)
                verts.append(tuple(m))
            return cache[key]

        next_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            next_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = next_faces
    vertices = np.asarray(verts, dtype=np.float64) * radius + np.asarray(center, dtype=np.float64)
    return Mesh3D(category, vertices, np.asarray(faces, dtype=np.int64), color)
