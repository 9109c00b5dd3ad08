"""Input validation helpers used at public API boundaries."""

from __future__ import annotations

import numbers

import numpy as np

from .errors import ValidationError


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_non_negative(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value < 0:
        raise ValidationError(f"{name} must be a non-negative finite number, got {value!r}")
    return float(value)


def check_range(value, name: str, lo=None, hi=None) -> float:
    value = float(value)
    if not np.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    if lo is not None and value < lo:
        raise ValidationError(f"{name} must be >= {lo}, got {value}")
    if hi is not None and value > hi:
        raise ValidationError(f"{name} must be <= {hi}, got {value}")
    return value


def check_rgb_array(pixels) -> np.ndarray:
    """Validate an (H, W, 3) uint8 image array and return it."""
    arr = np.asarray(pixels)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValidationError(f"expected an (H, W, 3) RGB array, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValidationError(f"image dimensions must be positive, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        raise ValidationError(f"expected uint8 pixels, got dtype {arr.dtype}")
    return arr


def check_mask_array(bits) -> np.ndarray:
    """Validate an (H, W) uint8 binary grid with values in {0, 255}."""
    arr = np.asarray(bits)
    if arr.ndim != 2:
        raise ValidationError(f"expected a 2-D mask array, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        raise ValidationError(f"expected uint8 mask, got dtype {arr.dtype}")
    bad = ~np.isin(arr, (0, 255))
    if bad.any():
        raise ValidationError("mask values must be exactly 0 or 255")
    return arr


def check_points(points, name: str = "points", min_points: int = 1) -> np.ndarray:
    """Coerce to an (N, 2) float64 array of finite coordinates."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError(f"{name} must have shape (N, 2), got {arr.shape}")
    if arr.shape[0] < min_points:
        raise ValidationError(f"{name} needs at least {min_points} points, got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValidationError(f"{name} contains non-finite coordinates")
    return arr
