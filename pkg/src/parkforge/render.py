"""Top-down rasterization of analysis overlays to PNG plus a JSON legend."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from .analysis import (
    DRAINAGE_HIGH,
    DRAINAGE_LOW,
    ELEVATION_HIGH,
    ELEVATION_LOW,
    SLOPE_BIN_COLORS,
    AnalysisOverlay,
)
from .errors import PipelineIOError, ValidationError

_BACKGROUND = (255, 255, 255)
_ARROW = (10, 10, 10)


def _ramp_colors(t: np.ndarray, low, high) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)[:, None]
    low = np.asarray(low, dtype=np.float64)
    high = np.asarray(high, dtype=np.float64)
    return np.rint(low + t * (high - low)).astype(np.uint8)


def _face_colors(overlay: AnalysisOverlay) -> np.ndarray:
    if overlay.kind == "slope":
        palette = np.asarray(SLOPE_BIN_COLORS, dtype=np.uint8)
        return palette[np.asarray(overlay.per_face, dtype=np.int64)]
    if overlay.kind == "elevation":
        vmin, vmax = overlay.value_min, overlay.value_max
        if vmax <= vmin:
            t = np.full(overlay.face_count, 0.5)
        else:
            t = (np.asarray(overlay.per_face, dtype=np.float64) - vmin) / (vmax - vmin)
        return _ramp_colors(t, ELEVATION_LOW, ELEVATION_HIGH)
    if overlay.kind == "drainage":
        top = max(np.log1p(max(overlay.value_max - 1.0, 0.0)), 1e-12)
        t = np.log1p(overlay.accumulation - 1.0) / top
        return _ramp_colors(t, DRAINAGE_LOW, DRAINAGE_HIGH)
    raise ValidationError(f"unknown overlay kind {overlay.kind!r}")


def render_overlay(overlay: AnalysisOverlay, out_path, px_per_meter: float) -> tuple[Path, Path]:
    """Rasterize the overlay top-down and write PNG + sidecar legend JSON.

    Output is deterministic: flat scanline fills, no antialiasing, no
    timestamps in the PNG.
    """
    if px_per_meter <= 0:
        raise ValidationError(f"px_per_meter must be positive, got {px_per_meter}")
    out_path = Path(out_path)
    xmin, ymin, xmax, ymax = overlay.bounds
    width = max(int(np.ceil((xmax - xmin) * px_per_meter)) + 1, 1)
    height = max(int(np.ceil((ymax - ymin) * px_per_meter)) + 1, 1)
    image = Image.new("RGB", (width, height), _BACKGROUND)
    draw = ImageDraw.Draw(image)

    def to_px(points_xy: np.ndarray) -> np.ndarray:
        out = np.empty_like(points_xy, dtype=np.float64)
        out[..., 0] = (points_xy[..., 0] - xmin) * px_per_meter
        out[..., 1] = (ymax - points_xy[..., 1]) * px_per_meter
        return out

    if overlay.face_count:
        colors = _face_colors(overlay)
        tris_px = to_px(overlay.triangles_xy)
        for tri, color in zip(tris_px.tolist(), colors.tolist()):
            draw.polygon([tuple(p) for p in tri], fill=tuple(color))

    if overlay.kind == "drainage" and overlay.face_count:
        flow = np.asarray(overlay.per_face, dtype=np.float64)
        moving = np.hypot(flow[:, 0], flow[:, 1]) > 1e-9
        if moving.any():
            centroids = overlay.triangles_xy.mean(axis=1)
            e1 = overlay.triangles_xy[:, 1] - overlay.triangles_xy[:, 0]
            e2 = overlay.triangles_xy[:, 2] - overlay.triangles_xy[:, 0]
            mean_edge = float(
                np.sqrt(np.abs(0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])).mean())
            )
            top = max(np.log1p(max(overlay.value_max - 1.0, 0.0)), 1e-12)
            strength = np.log1p(overlay.accumulation - 1.0) / top
            lengths = mean_edge * (0.4 + 0.6 * strength)
            starts = to_px(centroids[moving])
            ends = to_px(centroids[moving] + flow[moving] * lengths[moving, None])
            d = ends - starts
            norms = np.hypot(d[:, 0], d[:, 1])
            norms = np.where(norms < 1e-9, 1.0, norms)
            unit = d / norms[:, None]
            perp = np.column_stack([-unit[:, 1], unit[:, 0]])
            back = np.minimum(3.0, norms / 2.0)[:, None] * unit
            side = np.minimum(2.0, norms / 3.0)[:, None] * perp
            for i in range(len(starts)):
                a, b = starts[i], ends[i]
                draw.line([tuple(a), tuple(b)], fill=_ARROW)
                draw.line([tuple(b), tuple(b - back[i] + side[i])], fill=_ARROW)
                draw.line([tuple(b), tuple(b - back[i] - side[i])], fill=_ARROW)

    png_path = out_path
    sidecar_path = out_path.with_suffix(".json")
    sidecar = {
        "kind": overlay.kind,
        "legend": [{"label": label, "color": list(color)} for label, color in overlay.legend],
        "stats": {
            "min": overlay.value_min,
            "max": overlay.value_max,
            "bin_counts": [int(c) for c in overlay.bin_counts],
        },
    }
    try:
        image.save(png_path, format="PNG")
        sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n")
    except OSError as exc:
        raise PipelineIOError(f"cannot write overlay to {png_path}: {exc}") from exc
    return png_path, sidecar_path
