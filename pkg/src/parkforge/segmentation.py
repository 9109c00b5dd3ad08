"""Split a plan into one binary mask per element category."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import PipelineIOError, ValidationError
from .palette import Palette
from .raster import RasterPlan
from .validation import check_mask_array


@dataclass
class CategoryMask:
    """Binary grid for one category: foreground 255, background 0."""

    category: str
    bits: np.ndarray

    def __post_init__(self) -> None:
        self.bits = check_mask_array(self.bits)

    @property
    def width(self) -> int:
        return int(self.bits.shape[1])

    @property
    def height(self) -> int:
        return int(self.bits.shape[0])


def segment(plan: RasterPlan, palette: Palette) -> list[CategoryMask]:
    """One mask per palette entry, in palette order.

    A pixel is foreground in a category iff every channel lies within
    that category's [ref - tol, ref + tol] range; disjoint ranges make
    the masks mutually exclusive.
    """
    palette.validate()
    pixels = plan.pixels.astype(np.int16)
    masks = []
    for entry in palette.entries:
        ref = np.array(entry.color, dtype=np.int16)
        inside = (np.abs(pixels - ref) <= entry.tolerance).all(axis=2)
        masks.append(CategoryMask(entry.category, np.where(inside, 255, 0).astype(np.uint8)))
    return masks


def mask_filename(category: str) -> str:
    return f"mask_{category}.png"


def save_mask(mask: CategoryMask, path) -> Path:
    path = Path(path)
    try:
        Image.fromarray(mask.bits, mode="L").save(path, format="PNG")
    except OSError as exc:
        raise PipelineIOError(f"cannot write {path}: {exc}") from exc
    return path


def load_mask(path, category: str) -> CategoryMask:
    path = Path(path)
    try:
        with Image.open(path) as im:
            bits = np.asarray(im.convert("L"), dtype=np.uint8)
    except OSError as exc:
        raise PipelineIOError(f"cannot read mask for category {category!r}: {exc}") from exc
    if not np.isin(bits, (0, 255)).all():
        raise ValidationError(f"{path}: mask for {category!r} has values other than 0/255")
    return CategoryMask(category, bits)
