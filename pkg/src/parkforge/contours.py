"""Binary mask cleanup and outer-boundary extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ValidationError
from .geometry import ensure_ccw
from .segmentation import CategoryMask

_EIGHT = np.ones((3, 3), dtype=bool)

# clockwise screen order starting west, as (dx, dy)
_DIRS = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_DIR_INDEX = {d: i for i, d in enumerate(_DIRS)}


@dataclass
class TracedContour:
    """Outer boundary ring of one 8-connected foreground component.

    points are (x, y) pixel coordinates, counter-clockwise in a y-up
    frame; area_px is the component's total pixel count.  Components of
    one or two pixels yield rings shorter than 3 points.
    """

    points: np.ndarray
    area_px: int


def _moore_trace(fg: np.ndarray, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Follow the boundary clockwise on screen; fg must be padded by 1."""
    ring = [start]
    cur = start
    back = 0  # start pixel is the top-left of its component, so west is background
    first_step = None
    max_steps = 4 * fg.size
    for _ in range(max_steps):
        nxt = None
        for k in range(1, 9):
            d = (back + k) % 8
            cand = (cur[0] + _DIRS[d][0], cur[1] + _DIRS[d][1])
            if fg[cand[1], cand[0]]:
                nxt = cand
                break
        if nxt is None:
            return ring  # isolated pixel
        if first_step is None:
            first_step = (cur, nxt)
        elif (cur, nxt) == first_step:
            break
        ring.append(nxt)
        # backtrack: the last background cell scanned before hitting nxt
        back_cell = (cur[0] + _DIRS[(d - 1) % 8][0], cur[1] + _DIRS[(d - 1) % 8][1])
        back = _DIR_INDEX[(back_cell[0] - nxt[0], back_cell[1] - nxt[1])]
        cur = nxt
    if len(ring) > 1 and ring[-1] == start:
        ring.pop()
    return ring


def trace_contours(mask: CategoryMask | np.ndarray) -> list[TracedContour]:
    """One boundary ring per 8-connected component, in label order.

    Ring points are foreground pixels adjacent to background, each pixel
    of a filled component's border visited once.
    """
    bits = mask.bits if isinstance(mask, CategoryMask) else np.asarray(mask)
    labels, count = ndimage.label(bits > 0, structure=_EIGHT)
    contours = []
    for index, slc in enumerate(ndimage.find_objects(labels), start=1):
        if slc is None:
            continue
        component = labels[slc] == index
        padded = np.pad(component, 1)
        ys, xs = np.nonzero(padded)
        order = np.lexsort((xs, ys))
        start = (int(xs[order[0]]), int(ys[order[0]]))
        ring = _moore_trace(padded, start)
        pts = np.asarray(ring, dtype=np.float64)
        # undo padding and slice offsets
        pts[:, 0] += slc[1].start - 1
        pts[:, 1] += slc[0].start - 1
        if len(pts) >= 3:
            pts = ensure_ccw(pts)
        contours.append(TracedContour(pts.astype(np.int64), int(component.sum())))
    return contours


def morphological_clean(mask: CategoryMask, kernel: int = 3, open_then_close: bool = True) -> CategoryMask:
    """Binary opening and closing with a square structuring element.

    Opening removes foreground speckles smaller than the kernel; closing
    fills comparable holes.  kernel = 1 is the identity.  Border handling
    keeps an all-foreground mask all-foreground.
    """
    if kernel < 1 or kernel % 2 == 0:
        raise ValidationError(f"kernel must be odd and >= 1, got {kernel}")
    fg = mask.bits > 0
    if kernel > 1:
        structure = np.ones((kernel, kernel), dtype=bool)

        def opening(a):
            eroded = ndimage.binary_erosion(a, structure, border_value=1)
            return ndimage.binary_dilation(eroded, structure, border_value=0)

        def closing(a):
            dilated = ndimage.binary_dilation(a, structure, border_value=0)
            return ndimage.binary_erosion(dilated, structure, border_value=1)

        fg = closing(opening(fg)) if open_then_close else opening(closing(fg))
    return CategoryMask(mask.category, np.where(fg, 255, 0).astype(np.uint8))
