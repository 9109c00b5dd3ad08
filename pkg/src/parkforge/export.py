"""glTF 2.0 and Wavefront OBJ scene writers.

One mesh node per element, named ``<category>_<index>`` with the index
counted per category in scene order.  The glTF buffer holds little-endian
float32 positions and uint32 indices; byte output is deterministic for a
given scene.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .builders import Scene3D
from .errors import PipelineIOError

_FLOAT32 = 5126
_UINT32 = 5125
_ARRAY_BUFFER = 34962
_ELEMENT_ARRAY_BUFFER = 34963
_TRIANGLES = 4


def node_names(scene: Scene3D) -> list[str]:
    counters: dict[str, int] = {}
    names = []
    for mesh in scene.meshes:
        idx = counters.get(mesh.category, 0)
        counters[mesh.category] = idx + 1
        names.append(f"{mesh.category}_{idx}")
    return names


def write_gltf(scene: Scene3D, gltf_path, bin_path=None) -> list[Path]:
    gltf_path = Path(gltf_path)
    bin_path = Path(bin_path) if bin_path else gltf_path.with_suffix(".bin")

    buffer = bytearray()
    accessors, buffer_views, materials, meshes, nodes = [], [], [], [], []
    material_index: dict[str, int] = {}
    names = node_names(scene)

    for mesh, name in zip(scene.meshes, names):
        if mesh.category not in material_index:
            material_index[mesh.category] = len(materials)
            r, g, b = mesh.color
            materials.append(
                {
                    "name": mesh.category,
                    "pbrMetallicRoughness": {
                        "baseColorFactor": [r / 255.0, g / 255.0, b / 255.0, 1.0],
                        "metallicFactor": 0.0,
                        "roughnessFactor": 1.0,
                    },
                }
            )
        positions = np.ascontiguousarray(mesh.vertices, dtype="<f4")
        indices = np.ascontiguousarray(mesh.triangles.ravel(), dtype="<u4")

        pos_offset = len(buffer)
        buffer.extend(positions.tobytes())
        buffer_views.append(
            {
                "buffer": 0,
                "byteOffset": pos_offset,
                "byteLength": positions.nbytes,
                "target": _ARRAY_BUFFER,
            }
        )
        accessors.append(
            {
                "bufferView": len(buffer_views) - 1,
                "componentType": _FLOAT32,
                "count": len(positions),
                "type": "VEC3",
                "min": [float(v) for v in positions.min(axis=0)],
                "max": [float(v) for v in positions.max(axis=0)],
            }
        )
        pos_accessor = len(accessors) - 1

        idx_offset = len(buffer)
        buffer.extend(indices.tobytes())
        buffer_views.append(
            {
                "buffer": 0,
                "byteOffset": idx_offset,
                "byteLength": indices.nbytes,
                "target": _ELEMENT_ARRAY_BUFFER,
            }
        )
        accessors.append(
            {
                "bufferView": len(buffer_views) - 1,
                "componentType": _UINT32,
                "count": len(indices),
                "type": "SCALAR",
            }
        )

        meshes.append(
            {
                "name": name,
                "primitives": [
                    {
                        "attributes": {"POSITION": pos_accessor},
                        "indices": len(accessors) - 1,
                        "material": material_index[mesh.category],
                        "mode": _TRIANGLES,
                    }
                ],
            }
        )
        nodes.append({"name": name, "mesh": len(meshes) - 1})

    document: dict = {"asset": {"version": "2.0", "generator": "parkforge"}, "scene": 0}
    # glTF forbids empty arrays, so sections appear only when populated
    document["scenes"] = [{"nodes": list(range(len(nodes)))} if nodes else {}]
    if nodes:
        document["nodes"] = nodes
        document["meshes"] = meshes
        document["materials"] = materials
        document["accessors"] = accessors
        document["bufferViews"] = buffer_views
        document["buffers"] = [{"uri": bin_path.name, "byteLength": len(buffer)}]

    try:
        gltf_path.write_text(json.dumps(document, indent=1) + "\n")
        bin_path.write_bytes(bytes(buffer))
    except OSError as exc:
        raise PipelineIOError(f"cannot write glTF to {gltf_path}: {exc}") from exc
    return [gltf_path, bin_path]


def write_obj(scene: Scene3D, obj_path, mtl_path=None) -> list[Path]:
    obj_path = Path(obj_path)
    mtl_path = Path(mtl_path) if mtl_path else obj_path.with_suffix(".mtl")

    seen: dict[str, tuple[int, int, int]] = {}
    for mesh in scene.meshes:
        seen.setdefault(mesh.category, mesh.color)
    mtl_lines = []
    for category, (r, g, b) in seen.items():
        mtl_lines.append(f"newmtl mat_{category}")
        mtl_lines.append(f"Kd {r / 255.0:.6f} {g / 255.0:.6f} {b / 255.0:.6f}")
        mtl_lines.append("")

    obj_lines = [f"mtllib {mtl_path.name}"]
    offset = 1
    for mesh, name in zip(scene.meshes, node_names(scene)):
        obj_lines.append(f"o {name}")
        obj_lines.append(f"usemtl mat_{mesh.category}")
        for x, y, z in mesh.vertices:
            obj_lines.append(f"v {x:.6f} {y:.6f} {z:.6f}")
        for i, j, k in mesh.triangles:
            obj_lines.append(f"f {offset + i} {offset + j} {offset + k}")
        offset += len(mesh.vertices)

    try:
        obj_path.write_text("\n".join(obj_lines) + "\n")
        mtl_path.write_text("\n".join(mtl_lines) + ("\n" if mtl_lines else ""))
    except OSError as exc:
        raise PipelineIOError(f"cannot write OBJ to {obj_path}: {exc}") from exc
    return [obj_path, mtl_path]


def export_scene(scene: Scene3D, out_dir, stem: str = "scene") -> list[Path]:
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PipelineIOError(f"cannot create {out_dir}: {exc}") from exc
    files = write_gltf(scene, out_dir / f"{stem}.gltf", out_dir / f"{stem}.bin")
    files += write_obj(scene, out_dir / f"{stem}.obj", out_dir / f"{stem}.mtl")
    return files
