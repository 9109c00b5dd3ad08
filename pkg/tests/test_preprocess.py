import numpy as np
import pytest
from scipy.ndimage import gaussian_filter1d

from conftest import build_two_region_plan
from parkforge.errors import ValidationError
from parkforge.preprocess import enhance, smooth
from parkforge.raster import RasterPlan

# a pixel counts as restored when it lands within this per-channel distance
# of the clean fixture (well inside the palette tolerance of 20)
RESTORE_TOL = 8


def test_smooth_constant_image_unchanged():
    plan = RasterPlan(np.full((16, 16, 3), (60, 120, 180), dtype=np.uint8))
    for lam in (0.01, 0.02, 0.1):
        out = smooth(plan, lam)
        assert np.array_equal(out.pixels, plan.pixels)


def test_smooth_lambda_zero_is_identity():
    plan = RasterPlan(np.random.default_rng(3).integers(0, 256, (20, 20, 3), dtype=np.uint8))
    out = smooth(plan, 0.0)
    assert np.array_equal(out.pixels, plan.pixels)


def test_smooth_restores_impulse_noise():
    noisy, clean, ys, xs = build_two_region_plan(noise_fraction=0.01)
    out = smooth(noisy, 0.02)
    before = (
        (np.abs(noisy.pixels[ys, xs].astype(int) - clean.pixels[ys, xs].astype(int)) <= RESTORE_TOL)
        .all(axis=1)
        .mean()
    )
    after = (
        (np.abs(out.pixels[ys, xs].astype(int) - clean.pixels[ys, xs].astype(int)) <= RESTORE_TOL)
        .all(axis=1)
        .mean()
    )
    assert before < 0.2
    assert after >= 0.95


def test_smooth_preserves_dimensions_and_range():
    noisy, _, _, _ = build_two_region_plan(noise_fraction=0.01)
    out = smooth(noisy, 0.02)
    assert out.pixels.shape == noisy.pixels.shape
    assert out.pixels.dtype == np.uint8


def test_smooth_idempotent_in_the_limit():
    noisy, _, _, _ = build_two_region_plan(noise_fraction=0.01)
    once = smooth(noisy, 0.02)
    twice = smooth(once, 0.02)
    changed = (once.pixels != twice.pixels).any(axis=2).mean()
    assert changed <= 0.01


def test_smooth_rejects_negative_lambda():
    plan = RasterPlan(np.zeros((4, 4, 3), dtype=np.uint8))
    with pytest.raises(ValidationError):
        smooth(plan, -0.1)


def test_enhance_identity_parameters():
    plan = RasterPlan(np.random.default_rng(7).integers(0, 256, (12, 12, 3), dtype=np.uint8))
    out = enhance(plan, sharpen_amount=0.0, contrast_gain=1.0)
    assert np.array_equal(out.pixels, plan.pixels)


def test_enhance_constant_image_stays_constant():
    plan = RasterPlan(np.full((10, 10, 3), (90, 90, 90), dtype=np.uint8))
    out = enhance(plan, sharpen_amount=2.0, contrast_gain=1.5)
    assert (out.pixels == out.pixels[0, 0]).all()


def test_enhance_step_edge_overshoot():
    img = np.full((9, 32, 3), 100, dtype=np.uint8)
    img[:, 16:] = 200
    out = enhance(RasterPlan(img), sharpen_amount=1.0, contrast_gain=1.0)
    band = out.pixels[:, 13:19, 0].astype(int)
    assert band.max() > 200
    assert band.min() < 100

    # oracle: the same unsharp mask convolved by hand on the 1-D profile
    profile = img[0, :, 0].astype(float)
    blurred = gaussian_filter1d(profile, sigma=1.0)
    expected = np.clip(np.rint(profile + 1.0 * (profile - blurred)), 0, 255)
    assert np.abs(out.pixels[4, :, 0].astype(float) - expected).max() <= 1.0


def test_enhance_validates_parameters():
    plan = RasterPlan(np.zeros((4, 4, 3), dtype=np.uint8))
    with pytest.raises(ValidationError):
        enhance(plan, sharpen_amount=-1.0)
    with pytest.raises(ValidationError):
        enhance(plan, contrast_gain=0.0)
