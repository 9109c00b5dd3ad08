"""Loading and storing the plan image."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import FormatError, PipelineIOError, ValidationError
from .validation import check_positive, check_rgb_array


@dataclass
class RasterPlan:
    """An RGB layout plan with a physical scale.

    pixels is a row-major (height, width, 3) uint8 array; scale is in
    meters per pixel and must be strictly positive.
    """

    pixels: np.ndarray
    scale: float = 1.0

    def __post_init__(self) -> None:
        self.pixels = check_rgb_array(self.pixels)
        self.scale = check_positive(self.scale, "scale")

    @property
    def width(self) -> int:
        return int(self.pixels.shape[1])

    @property
    def height(self) -> int:
        return int(self.pixels.shape[0])

    def copy(self) -> "RasterPlan":
        return RasterPlan(self.pixels.copy(), self.scale)


def load_plan(path, scale: float = 1.0) -> RasterPlan:
    """Decode a PNG file into a RasterPlan, discarding any alpha channel."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise PipelineIOError(f"cannot read {path}: {exc}") from exc
    if len(raw) == 0:
        raise PipelineIOError(f"cannot read {path}: file is empty")
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise FormatError(f"{path}: unsupported image format {im.format!r}, expected PNG")
            if im.width < 1 or im.height < 1:
                raise ValidationError(f"{path}: image has a zero dimension")
            pixels = np.asarray(im.convert("RGB"), dtype=np.uint8)
    except UnidentifiedImageError as exc:
        raise FormatError(f"{path}: not a recognized image file") from exc
    except OSError as exc:
        raise PipelineIOError(f"cannot decode {path}: {exc}") from exc
    return RasterPlan(pixels, scale)


def save_plan_png(plan: RasterPlan, path) -> Path:
    path = Path(path)
    try:
        Image.fromarray(plan.pixels, mode="RGB").save(path, format="PNG")
    except OSError as exc:
        raise PipelineIOError(f"cannot write {path}: {exc}") from exc
    return path
