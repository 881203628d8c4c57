"""Core grayscale image primitives.

Images are 2-D float64 arrays, row-major, with intensities nominally in
[0, 1] (8-bit inputs are divided by 255 on load). Every neighborhood
operation in this package uses replicate (clamp-to-edge) padding so that
borders never introduce artificial structure.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
import scipy.ndimage as ndi

__all__ = [
    "GradientField",
    "SummedAreaTable",
    "as_image",
    "gaussian_kernel",
    "gaussian_smooth",
    "integral_image",
    "sobel_gradients",
    "to_grayscale",
]

GRAY_WEIGHTS = (0.299, 0.587, 0.114)


def as_image(a) -> np.ndarray:
    """Validate and return an image as a 2-D float64 array."""
    img = np.asarray(a, dtype=np.float64)
    if img.ndim != 2 or img.size == 0:
        raise ValueError(f"image must be a non-empty 2-D array, got shape {img.shape}")
    if not np.isfinite(img).all():
        raise ValueError("image contains non-finite samples")
    return img


def to_grayscale(rgb) -> np.ndarray:
    """Convert an 8-bit RGB image to a grayscale image in [0, 1].

    Accepts an (H, W, 3) array or a sequence of three equally sized
    channel arrays. Uses the ITU-R BT.601 luminance weights
    0.299 R + 0.587 G + 0.114 B, then scales by 1/255.
    """
    if isinstance(rgb, (tuple, list)):
        if len(rgb) != 3:
            raise ValueError(f"expected 3 channels, got {len(rgb)}")
        chans = [np.asarray(c, dtype=np.float64) for c in rgb]
        if not (chans[0].shape == chans[1].shape == chans[2].shape):
            raise ValueError("channel dimensions do not match")
        arr = np.stack(chans, axis=-1)
    else:
        arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[-1] != 3:
        raise ValueError(f"expected an (H, W, 3) image, got shape {arr.shape}")
    r, g, b = arr[..., 0], arr[..., 1], arr[..., 2]
    wr, wg, wb = GRAY_WEIGHTS
    return (wr * r + wg * g + wb * b) / 255.0


def gaussian_kernel(window: int, sigma: float) -> np.ndarray:
    """1-D Gaussian kernel of odd length `window`, normalized to unit sum."""
    if window % 2 == 0 or window < 1:
        raise ValueError(f"window must be a positive odd integer, got {window}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    x = np.arange(window, dtype=np.float64) - window // 2
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def gaussian_smooth(img, window: int, sigma: float) -> np.ndarray:
    """Separable Gaussian smoothing with replicate border padding.

    The 2-D kernel is the outer product of the normalized 1-D kernel with
    itself, so constants pass through unchanged.
    """
    img = as_image(img)
    if window > min(img.shape):
        raise ValueError(
            f"window {window} exceeds image size {img.shape[1]}x{img.shape[0]}"
        )
    k = gaussian_kernel(window, sigma)
    out = ndi.correlate1d(img, k, axis=0, mode="nearest")
    return ndi.correlate1d(out, k, axis=1, mode="nearest")


class SummedAreaTable:
    """Cumulative-sum table answering rectangular box sums in O(1).

    The table is stored with a zero guard row/column, so the sum over
    pixel rows [r0, r1] x cols [c0, c1] (inclusive) takes four lookups.
    `integral_at` evaluates the running integral at *continuous*
    coordinates, which makes fractional box integrals exact for
    piecewise-constant images (the running integral of such an image is
    piecewise bilinear).
    """

    def __init__(self, img):
        img = as_image(img)
        self.height, self.width = img.shape
        table = np.zeros((self.height + 1, self.width + 1), dtype=np.float64)
        np.cumsum(img, axis=0, out=table[1:, 1:])
        np.cumsum(table[1:, 1:], axis=1, out=table[1:, 1:])
        self.table = table

    @property
    def cumulative(self) -> np.ndarray:
        """Entry (i, j) = sum of all samples with row <= i and col <= j."""
        return self.table[1:, 1:]

    def box_sum(self, r0: int, c0: int, r1: int, c1: int) -> float:
        """Sum over pixel rows r0..r1 and cols c0..c1, inclusive."""
        if not (0 <= r0 <= r1 < self.height and 0 <= c0 <= c1 < self.width):
            raise ValueError(f"box ({r0},{c0})-({r1},{c1}) out of range")
        t = self.table
        return float(t[r1 + 1, c1 + 1] - t[r0, c1 + 1] - t[r1 + 1, c0] + t[r0, c0])

    def box_mean(self, r0: int, c0: int, r1: int, c1: int) -> float:
        return self.box_sum(r0, c0, r1, c1) / ((r1 - r0 + 1) * (c1 - c0 + 1))

    def integral_at(self, r, c):
        """Running integral at continuous coordinates (r, c), elementwise.

        Coordinates live in [0, height] x [0, width]; integer coordinates
        reproduce the plain table entries.
        """
        r = np.asarray(r, dtype=np.float64)
        c = np.asarray(c, dtype=np.float64)
        ri = np.clip(np.floor(r).astype(np.intp), 0, self.height - 1)
        ci = np.clip(np.floor(c).astype(np.intp), 0, self.width - 1)
        fr = r - ri
        fc = c - ci
        t = self.table
        return (
            (1.0 - fr) * (1.0 - fc) * t[ri, ci]
            + (1.0 - fr) * fc * t[ri, ci + 1]
            + fr * (1.0 - fc) * t[ri + 1, ci]
            + fr * fc * t[ri + 1, ci + 1]
        )

    def box_integral(self, r0, c0, r1, c1):
        """Integral over the continuous rectangle [r0, r1] x [c0, c1]."""
        return (
            self.integral_at(r1, c1)
            - self.integral_at(r0, c1)
            - self.integral_at(r1, c0)
            + self.integral_at(r0, c0)
        )


def integral_image(img) -> SummedAreaTable:
    """Build the summed-area table of an image."""
    return SummedAreaTable(img)


class GradientField(NamedTuple):
    """Per-pixel intensity gradients (x = columns, y = rows, downward)."""

    gx: np.ndarray
    gy: np.ndarray


def sobel_gradients(img) -> GradientField:
    """Standard 3x3 Sobel gradients with replicate padding.

    No normalization factor is applied; callers that only need the
    direction are unaffected, and magnitudes are consistently scaled.
    """
    img = as_image(img)
    if min(img.shape) < 3:
        raise ValueError(f"image too small for 3x3 gradients: {img.shape}")
    p = np.pad(img, 1, mode="edge")
    right = p[:-2, 2:] + 2.0 * p[1:-1, 2:] + p[2:, 2:]
    left = p[:-2, :-2] + 2.0 * p[1:-1, :-2] + p[2:, :-2]
    bottom = p[2:, :-2] + 2.0 * p[2:, 1:-1] + p[2:, 2:]
    top = p[:-2, :-2] + 2.0 * p[:-2, 1:-1] + p[:-2, 2:]
    return GradientField(gx=right - left, gy=bottom - top)


def _odd_window_for_sigma(sigma: float, shape: tuple[int, int]) -> int:
    """Smoothing window 2*ceil(3*sigma)+1, clipped to fit the image."""
    window = 2 * math.ceil(3.0 * sigma) + 1
    limit = min(shape)
    if window > limit:
        window = limit if limit % 2 == 1 else limit - 1
    return max(window, 1)
