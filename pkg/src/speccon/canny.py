"""Canny edge detector, the comparison baseline.

Gaussian smoothing, Sobel gradients, non-maximum suppression of the
gradient magnitude along the gradient direction (same suppression rule as
the strength-map thinning), then hysteresis on the magnitude normalized
by its maximum. Relative thresholds make the detector invariant to
brightness shifts and contrast scaling.
"""

from __future__ import annotations

import math

import numpy as np

from .image import _odd_window_for_sigma, as_image, gaussian_smooth, sobel_gradients
from .thinning import _directional_nms, binarize

__all__ = ["DEFAULT_SIGMA", "canny", "canny_strength"]

DEFAULT_SIGMA = math.sqrt(2)


def canny_strength(img, sigma: float = DEFAULT_SIGMA) -> np.ndarray:
    """Gradient magnitude after smoothing, normalized to a maximum of 1."""
    img = as_image(img)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    window = _odd_window_for_sigma(sigma, img.shape)
    smoothed = gaussian_smooth(img, window, sigma)
    grad = sobel_gradients(smoothed)
    magnitude = np.hypot(grad.gx, grad.gy)
    peak = magnitude.max()
    if peak > 0:
        magnitude /= peak
    return magnitude


def canny(
    img,
    sigma: float = DEFAULT_SIGMA,
    low: float = 0.1,
    high: float = 0.2,
) -> np.ndarray:
    """Binary Canny edge map with thresholds relative to the peak magnitude."""
    img = as_image(img)
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    window = _odd_window_for_sigma(sigma, img.shape)
    smoothed = gaussian_smooth(img, window, sigma)
    grad = sobel_gradients(smoothed)
    magnitude = np.hypot(grad.gx, grad.gy)
    peak = magnitude.max()
    if peak > 0:
        magnitude /= peak
    thinned = _directional_nms(magnitude, grad.gx, grad.gy)
    return binarize(thinned, low, high)
