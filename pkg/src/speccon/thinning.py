"""Non-maximum suppression and thresholding of edge-strength maps.

NMS keeps a pixel only when it is strictly greater than both of its
bilinearly interpolated neighbors along the local gradient direction, so
ridges collapse to one-pixel-wide curves. Thresholding turns the thinned
map into a binary edge map, optionally with hysteresis.
"""

from __future__ import annotations

import numpy as np
import scipy.ndimage as ndi

from .image import as_image, gaussian_smooth, sobel_gradients

__all__ = ["binarize", "nms"]

#: Light smoothing applied to the strength map before estimating the NMS
#: orientation; stabilizes directions on flat ridges without touching the
#: compared values.
ORIENTATION_SMOOTHING = (3, 0.8)

_EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)


def _directional_nms(values: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Suppress pixels that are not strict maxima along (gx, gy).

    The two neighbors are sampled one Chebyshev step away along the
    positive and negative gradient direction, bilinearly interpolated
    between the adjacent pixels; sampling clamps at the borders. Pixels
    with no defined direction (zero gradient) fall back to a horizontal
    comparison, which suppresses flat regions while preserving isolated
    peaks and vertical crests.
    """
    v = values
    h, w = v.shape
    ax = np.abs(gx)
    ay = np.abs(gy)
    # Rounding noise in the orientation source can leave ulp-sized
    # gradients on perfectly symmetric crests; treat those as undirected.
    tol = max(ax.max(), ay.max()) * 1e-12
    undirected = (ax <= tol) & (ay <= tol)
    ax = np.where(undirected, 1.0, ax)
    gx = np.where(undirected, 1.0, gx)

    sx = np.where(gx >= 0, 1, -1)
    sy = np.where(gy >= 0, 1, -1)
    horiz = ax >= ay
    frac = np.divide(ay, ax, out=np.zeros_like(ax), where=horiz)
    np.divide(ax, ay, out=frac, where=~horiz)

    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]

    def sample(dy, dx):
        return v[np.clip(rows + dy, 0, h - 1), np.clip(cols + dx, 0, w - 1)]

    plus = np.where(
        horiz,
        (1.0 - frac) * sample(0, sx) + frac * sample(sy, sx),
        (1.0 - frac) * sample(sy, 0) + frac * sample(sy, sx),
    )
    minus = np.where(
        horiz,
        (1.0 - frac) * sample(0, -sx) + frac * sample(-sy, -sx),
        (1.0 - frac) * sample(-sy, 0) + frac * sample(-sy, -sx),
    )
    return np.where((v > plus) & (v > minus), v, 0.0)


def nms(
    strength,
    *,
    orientation_smoothing: tuple[int, float] | None = ORIENTATION_SMOOTHING,
) -> np.ndarray:
    """Thin an edge-strength map along its own gradient orientation.

    Kept pixels retain their input value; everything else becomes 0. The
    orientation comes from Sobel gradients of a smoothed copy of the map;
    `orientation_smoothing` is that (window, sigma) pair, or None to use
    the raw map. Heavier smoothing steadies directions on noisy ridges;
    the compared values are never smoothed.
    """
    strength = as_image(strength)
    if min(strength.shape) < 3:
        raise ValueError(f"map too small for suppression: {strength.shape}")
    source = strength
    if orientation_smoothing is not None:
        window, sigma = orientation_smoothing
        source = gaussian_smooth(strength, window, sigma)
    grad = sobel_gradients(source)
    return _directional_nms(strength, grad.gx, grad.gy)


def binarize(thinned, low: float, high: float) -> np.ndarray:
    """Threshold a thinned map to a boolean edge map.

    With low == high this is a simple threshold (value >= high).
    Otherwise pixels >= high seed hysteresis, and pixels >= low join when
    8-connected to a seed through >=low pixels. Zero-valued pixels are
    never edges (suppression already ruled them out), so a threshold of 0
    selects exactly the surviving pixels.
    """
    thinned = as_image(thinned)
    if not (0.0 <= low <= high <= 1.0):
        if low > high:
            raise ValueError(f"low {low} > high {high}")
        raise ValueError(f"thresholds must lie in [0, 1], got low={low} high={high}")
    positive = thinned > 0.0
    if low == high:
        return positive & (thinned >= high)
    weak = positive & (thinned >= low)
    strong = weak & (thinned >= high)
    labels, count = ndi.label(weak, structure=_EIGHT_CONNECTED)
    if count == 0:
        return np.zeros_like(weak)
    keep = np.zeros(count + 1, dtype=bool)
    keep[np.unique(labels[strong])] = True
    keep[0] = False
    return keep[labels]
