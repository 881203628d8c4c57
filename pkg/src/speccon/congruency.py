"""Edge strength from the congruency of multiscale patch vectors.

Per pixel, the local energy is the norm of the summed patch vectors and
the amplitude is the sum of their norms. Their ratio, after subtracting a
noise threshold proportional to the mean energy, is the edge strength:
1 where all scales agree on the local structure, 0 where they cancel.

Because complete orthonormal bases preserve norms, the energy and
amplitude are identical in any such basis; the maps are therefore
computed directly from the patch vectors (identity basis).
`OrthonormalBasis.project` exists so that this invariance can be checked
against arbitrary bases.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .image import as_image, gaussian_smooth
from .patches import ScaleSet, patch_field, patch_field_naive

__all__ = [
    "EPS_GUARD",
    "EnergyMaps",
    "NoiseModel",
    "OrthonormalBasis",
    "congruency_of_vectors",
    "field_energy",
    "noise_threshold",
    "project",
    "spectrum_congruency_map",
    "spectrum_congruency_map_naive",
]

#: Amplitudes below this are treated as no signal (the strength is 0
#: there); keeps flat regions from dividing zero by zero.
EPS_GUARD = 1e-12

#: Tolerance of the Gram check when validating a basis.
GRAM_TOL = 1e-10


class OrthonormalBasis:
    """A complete set of orthonormal vectors, stored as matrix columns."""

    def __init__(self, vectors):
        m = np.asarray(vectors, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"basis must be a square matrix, got shape {m.shape}")
        gram = m.T @ m
        if np.max(np.abs(gram - np.eye(m.shape[0]))) > GRAM_TOL:
            raise ValueError("vectors are not orthonormal (Gram check failed)")
        self.vectors = m

    @property
    def dimension(self) -> int:
        return self.vectors.shape[0]

    @classmethod
    def identity(cls, n: int) -> "OrthonormalBasis":
        return cls(np.eye(n))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "OrthonormalBasis":
        q, r = np.linalg.qr(rng.standard_normal((n, n)))
        return cls(q * np.sign(np.diag(r)))

    def project(self, vec) -> np.ndarray:
        """Coefficients of `vec` on the basis vectors (norm preserved)."""
        v = np.asarray(vec, dtype=np.float64)
        if v.shape != (self.dimension,):
            raise ValueError(
                f"vector length {v.shape} does not match basis dimension "
                f"{self.dimension}"
            )
        return self.vectors.T @ v


def project(vec, basis: OrthonormalBasis) -> np.ndarray:
    """Project a vector onto an orthonormal basis."""
    return basis.project(vec)


def congruency_of_vectors(vectors, threshold: float = 0.0):
    """Energy, amplitude, and congruency of a set of equal-length vectors.

    Returns (energy, amplitude_sum, sc) where energy = ||sum of vectors||,
    amplitude_sum = sum of ||vector||, and
    sc = max(energy - threshold, 0) / amplitude_sum, zero when the
    amplitude falls below the guard.
    """
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError(f"expected K vectors of equal length, got shape {x.shape}")
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    energy = float(np.linalg.norm(x.sum(axis=0)))
    amplitude = float(np.linalg.norm(x, axis=1).sum())
    if amplitude < EPS_GUARD:
        sc = 0.0
    else:
        sc = min(max(energy - threshold, 0.0) / amplitude, 1.0)
    return energy, amplitude, sc


class EnergyMaps(NamedTuple):
    """Per-pixel local energy and summed amplitude."""

    energy: np.ndarray
    amplitude_sum: np.ndarray


class NoiseModel(NamedTuple):
    """Noise threshold derived from the mean of the energy map."""

    alpha: float
    mu: float
    threshold: float


def field_energy(field: np.ndarray) -> EnergyMaps:
    """Energy and amplitude maps from a (K, N, H, W) patch-vector field."""
    summed = field.sum(axis=0)
    energy = np.sqrt((summed * summed).sum(axis=0))
    amplitude = np.sqrt((field * field).sum(axis=1)).sum(axis=0)
    return EnergyMaps(energy=energy, amplitude_sum=amplitude)


def noise_threshold(energy_map, alpha: float) -> NoiseModel:
    """Threshold alpha * mu, with mu the mean energy over all pixels."""
    if alpha < 0:
        raise ValueError(f"alpha must be non-negative, got {alpha}")
    e = np.asarray(energy_map, dtype=np.float64)
    if e.size == 0:
        raise ValueError("energy map is empty")
    mu = float(e.mean())
    return NoiseModel(alpha=alpha, mu=mu, threshold=alpha * mu)


def _strength_from_energy(energy, amplitude, threshold: float) -> np.ndarray:
    numer = np.maximum(energy - threshold, 0.0)
    sc = np.zeros_like(energy)
    mask = amplitude >= EPS_GUARD
    np.divide(numer, amplitude, out=sc, where=mask)
    return np.minimum(sc, 1.0, out=sc)


def spectrum_congruency_map(
    img,
    scales: ScaleSet = ScaleSet(),
    prefilter: tuple[int, float] | None = None,
) -> np.ndarray:
    """Edge-strength map of an image, values in [0, 1].

    `prefilter`, if given, is a (window, sigma) pair applied as Gaussian
    smoothing before the patch analysis; useful under heavy noise. Two
    passes are logically performed: the energy map is completed first so
    that its mean can feed the noise threshold.
    """
    img = as_image(img)
    if prefilter is not None:
        window, sigma = prefilter
        img = gaussian_smooth(img, window, sigma)
    energy, amplitude = field_energy(patch_field(img, scales))
    model = noise_threshold(energy, scales.alpha)
    return _strength_from_energy(energy, amplitude, model.threshold)


def spectrum_congruency_map_naive(
    img,
    scales: ScaleSet = ScaleSet(),
    prefilter: tuple[int, float] | None = None,
) -> np.ndarray:
    """Reference edge-strength map built from explicit per-pixel loops.

    No summed-area tables anywhere on this path; it exists to validate
    `spectrum_congruency_map` and for benchmarking the fast path against.
    """
    img = as_image(img)
    if prefilter is not None:
        window, sigma = prefilter
        img = gaussian_smooth(img, window, sigma)
    energy, amplitude = field_energy(patch_field_naive(img, scales))
    model = noise_threshold(energy, scales.alpha)
    return _strength_from_energy(energy, amplitude, model.threshold)
