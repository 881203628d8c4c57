"""Deterministic synthetic scenes with exact ground truth, plus seeded noise.

The scene holds an axis-aligned rectangle, a disk, and a right triangle on
a uniform background. Boundaries sit at fixed sub-pixel positions and are
rendered with area coverage, so boundary pixels take intermediate values
and gradient maxima are unique instead of tying across a half-integer
edge. Curved and slanted boundaries are additionally pulled 0.3 px toward
the shape interior when rendered, which keeps the intensity transition
inside the interior-side boundary pixels; those pixels are the ground
truth. Region labels come from pixel-center membership.

Noise is drawn from the Philox 4x64 counter-based generator keyed by the
seed, in row-major order, so results are bit-identical across runs and
platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .image import as_image

__all__ = ["SynthScene", "add_gaussian_noise", "make_shapes"]

MIN_SIZE = 64

BACKGROUND = 0.25
RECT_VALUE = 0.75
DISK_VALUE = 0.55
TRIANGLE_VALUE = 0.9

#: Oversampling factor for coverage of curved/slanted boundaries.
SUPERSAMPLE = 8

#: Inward shift (pixels) of rendered curved boundaries relative to the
#: label geometry.
CURVE_BIAS = 0.3


@dataclass
class SynthScene:
    """Rendered image, its exact edge ground truth, and shape parameters."""

    image: np.ndarray
    gt: np.ndarray
    shapes: list[dict]


def _rect_coverage(img, top, bottom, left, right, value):
    h, w = img.shape
    rows = np.arange(h, dtype=np.float64)
    cols = np.arange(w, dtype=np.float64)
    cov_r = np.clip(np.minimum(rows + 0.5, bottom) - np.maximum(rows - 0.5, top), 0, 1)
    cov_c = np.clip(np.minimum(cols + 0.5, right) - np.maximum(cols - 0.5, left), 0, 1)
    cov = cov_r[:, None] * cov_c[None, :]
    img += cov * (value - BACKGROUND)


def _sampled_coverage(img, bbox, inside, value):
    """Render a shape via SUPERSAMPLE^2 subsamples inside its bounding box."""
    h, w = img.shape
    r0 = max(int(np.floor(bbox[0])) - 1, 0)
    r1 = min(int(np.ceil(bbox[1])) + 2, h)
    c0 = max(int(np.floor(bbox[2])) - 1, 0)
    c1 = min(int(np.ceil(bbox[3])) + 2, w)
    offs = (np.arange(SUPERSAMPLE) + 0.5) / SUPERSAMPLE - 0.5
    rr = (np.arange(r0, r1)[:, None] + offs[None, :]).reshape(-1)
    cc = (np.arange(c0, c1)[:, None] + offs[None, :]).reshape(-1)
    hits = inside(rr[:, None], cc[None, :])
    hits = hits.reshape(r1 - r0, SUPERSAMPLE, c1 - c0, SUPERSAMPLE)
    cov = hits.mean(axis=(1, 3))
    img[r0:r1, c0:c1] += cov * (value - BACKGROUND)


def make_shapes(width: int, height: int) -> SynthScene:
    """Fixed three-shape scene; same (width, height) always renders the
    same bits. Ground-truth pixels are the shape pixels 8-adjacent to a
    pixel of a different region."""
    if width < MIN_SIZE or height < MIN_SIZE:
        raise ValueError(f"scene must be at least {MIN_SIZE}x{MIN_SIZE}")
    h, w = height, width
    img = np.full((h, w), BACKGROUND, dtype=np.float64)

    # Straight boundaries sit 0.2-0.35 px inside their boundary pixel so
    # the intensity ramp peaks on the labeled (interior) side.
    rect_top = round(0.08 * h) - 0.27
    rect_bottom = round(0.46 * h) + 0.31
    rect_left = round(0.06 * w) - 0.23
    rect_right = round(0.55 * w) + 0.34

    disk_cy = round(0.27 * h) + 0.21
    disk_cx = round(0.78 * w) - 0.17
    disk_r = 0.09 * min(h, w) + 0.29

    tri_top = round(0.58 * h) - 0.19
    tri_bottom = round(0.92 * h) + 0.28
    tri_left = round(0.14 * w) - 0.24
    tri_right = round(0.56 * w) + 0.26

    _rect_coverage(img, rect_top, rect_bottom, rect_left, rect_right, RECT_VALUE)

    def disk_inside(radius):
        def inside(r, c):
            return (r - disk_cy) ** 2 + (c - disk_cx) ** 2 <= radius * radius

        return inside

    _sampled_coverage(
        img,
        (disk_cy - disk_r, disk_cy + disk_r, disk_cx - disk_r, disk_cx + disk_r),
        disk_inside(disk_r - CURVE_BIAS),
        DISK_VALUE,
    )

    tri_slope = (tri_right - tri_left) / (tri_bottom - tri_top)

    def tri_inside(hypotenuse_shift):
        def inside(r, c):
            span = (tri_right - tri_left) * (r - tri_top) / (tri_bottom - tri_top)
            return (
                (r >= tri_top)
                & (r <= tri_bottom)
                & (c >= tri_left)
                & (c <= tri_left + span - hypotenuse_shift)
            )

        return inside

    # Column shift equivalent to pulling the hypotenuse CURVE_BIAS along
    # its normal.
    shift = CURVE_BIAS * np.sqrt(1.0 + tri_slope * tri_slope)
    _sampled_coverage(
        img, (tri_top, tri_bottom, tri_left, tri_right), tri_inside(shift),
        TRIANGLE_VALUE,
    )

    rows = np.arange(h, dtype=np.float64)[:, None]
    cols = np.arange(w, dtype=np.float64)[None, :]
    labels = np.zeros((h, w), dtype=np.uint8)
    labels[
        (rows >= rect_top) & (rows <= rect_bottom)
        & (cols >= rect_left) & (cols <= rect_right)
    ] = 1
    labels[disk_inside(disk_r)(rows, cols)] = 2
    labels[tri_inside(0.0)(rows, cols)] = 3

    padded = np.pad(labels, 1, mode="edge")
    different = np.zeros((h, w), dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            different |= padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w] != labels
    gt = (labels > 0) & different

    shapes = [
        {
            "kind": "rectangle",
            "value": RECT_VALUE,
            "top": int(np.ceil(rect_top)),
            "bottom": int(np.floor(rect_bottom)),
            "left": int(np.ceil(rect_left)),
            "right": int(np.floor(rect_right)),
        },
        {
            "kind": "disk",
            "value": DISK_VALUE,
            "center": (disk_cy, disk_cx),
            "radius": disk_r,
        },
        {
            "kind": "triangle",
            "value": TRIANGLE_VALUE,
            "vertices": (
                (tri_top, tri_left),
                (tri_bottom, tri_left),
                (tri_bottom, tri_right),
            ),
        },
    ]
    return SynthScene(image=img, gt=gt, shapes=shapes)


def add_gaussian_noise(img, sigma_255: float, seed: int) -> np.ndarray:
    """Add white Gaussian noise of standard deviation sigma_255/255.

    The generator is Philox 4x64 keyed by `seed`; samples are drawn
    row-major for the whole image, so (image, sigma, seed) fully
    determines the output bits. The result is clamped to [0, 1].
    """
    img = as_image(img)
    if sigma_255 < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma_255}")
    if sigma_255 == 0:
        return img.copy()
    rng = np.random.Generator(np.random.Philox(key=seed))
    noisy = img + rng.standard_normal(img.shape) * (sigma_255 / 255.0)
    return np.clip(noisy, 0.0, 1.0)
