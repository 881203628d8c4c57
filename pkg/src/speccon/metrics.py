"""Quantitative evaluation of binary edge maps against ground truth.

Provides the localization-weighted figure of merit, correspondence-based
precision/recall/F with a pixel tolerance, and threshold sweeps producing
PR curves with dataset-level (ODS) and per-image (OIS) F summaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import distance_transform_edt
from scipy.spatial import cKDTree

from .thinning import binarize, nms

__all__ = [
    "DEFAULT_BETA",
    "EvalReport",
    "PRCurve",
    "default_tolerance",
    "distance_transform",
    "evaluate_pair",
    "fom",
    "match_edges",
    "ods_ois",
    "prf",
    "write_pr_csv",
]

#: Displacement weight in the figure of merit: 1 / (1 + beta * d^2).
DEFAULT_BETA = 1.0 / 9.0

#: Matching tolerance as a fraction of the image diagonal (the common
#: boundary-benchmark convention).
TOLERANCE_FRACTION = 0.0075


def _as_edge_map(a) -> np.ndarray:
    m = np.asarray(a)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"edge map must be a non-empty 2-D array, got {m.shape}")
    return m.astype(bool)


def default_tolerance(shape: tuple[int, int]) -> float:
    """Matching distance for an image shape: 0.0075 x diagonal."""
    h, w = shape
    return TOLERANCE_FRACTION * float(np.hypot(h, w))


def distance_transform(gt) -> np.ndarray:
    """Exact Euclidean distance to the nearest ground-truth edge pixel.

    An empty ground truth yields +inf everywhere.
    """
    gt = _as_edge_map(gt)
    if not gt.any():
        return np.full(gt.shape, np.inf)
    return distance_transform_edt(~gt)


def fom(det, gt, beta: float = DEFAULT_BETA) -> float:
    """Figure of merit: mean displacement weight of the detected pixels.

    Each detected pixel contributes 1 / (1 + beta * d^2) with d its
    distance to the nearest ground-truth pixel; the sum is divided by
    max(n_gt, n_det), so both spurious and missing detections lower the
    score. 1.0 means a pixel-perfect match.
    """
    det = _as_edge_map(det)
    gt = _as_edge_map(gt)
    if det.shape != gt.shape:
        raise ValueError(f"shape mismatch: det {det.shape} vs gt {gt.shape}")
    n_gt = int(gt.sum())
    if n_gt == 0:
        raise ValueError("ground truth has no edge pixels")
    n_det = int(det.sum())
    if n_det == 0:
        return 0.0
    d = distance_transform(gt)[det]
    return float(np.sum(1.0 / (1.0 + beta * d * d)) / max(n_gt, n_det))


def match_edges(det, gt, tol_px: float) -> int:
    """Count one-to-one correspondences within `tol_px` pixels.

    Detected pixels are processed in ascending order of their distance to
    the ground truth (ties broken by position); each one claims its
    nearest still-unmatched ground-truth pixel within the tolerance.
    Greedy, deterministic, and close to an optimal assignment at the
    tolerances used here.
    """
    det = _as_edge_map(det)
    gt = _as_edge_map(gt)
    if det.shape != gt.shape:
        raise ValueError(f"shape mismatch: det {det.shape} vs gt {gt.shape}")
    if tol_px < 0:
        raise ValueError(f"tolerance must be non-negative, got {tol_px}")
    det_pts = np.argwhere(det)
    gt_pts = np.argwhere(gt)
    if len(det_pts) == 0 or len(gt_pts) == 0:
        return 0

    nearest = distance_transform(gt)[det]
    order = np.lexsort((det_pts[:, 1], det_pts[:, 0], nearest))
    tree = cKDTree(gt_pts)
    matched = np.zeros(len(gt_pts), dtype=bool)
    count = 0
    for i in order:
        if nearest[i] > tol_px:
            continue
        candidates = tree.query_ball_point(det_pts[i], r=tol_px)
        if not candidates:
            continue
        deltas = gt_pts[candidates] - det_pts[i]
        dists = np.hypot(deltas[:, 0], deltas[:, 1])
        for j in np.lexsort((candidates, dists)):
            idx = candidates[j]
            if not matched[idx]:
                matched[idx] = True
                count += 1
                break
    return count


def prf(det, gt, tol_px: float) -> tuple[float, float, float]:
    """Precision, recall, and F-measure under tolerant matching.

    Conventions: precision is 1 when nothing was detected, recall is 1
    when the ground truth is empty, and F is 0 when both P and R vanish.
    """
    det = _as_edge_map(det)
    gt = _as_edge_map(gt)
    n_det = int(det.sum())
    n_gt = int(gt.sum())
    n_corr = match_edges(det, gt, tol_px)
    precision = 1.0 if n_det == 0 else n_corr / n_det
    recall = 1.0 if n_gt == 0 else n_corr / n_gt
    f = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f


@dataclass
class EvalReport:
    """Full report for one detection/ground-truth pair."""

    fom: float
    precision: float
    recall: float
    f: float
    n_gt: int
    n_det: int
    n_corr: int
    beta: float = DEFAULT_BETA
    tolerance_px: float = 0.0


def evaluate_pair(det, gt, beta: float = DEFAULT_BETA, tol_px: float | None = None) -> EvalReport:
    """Evaluate one edge map against ground truth with all metrics."""
    det = _as_edge_map(det)
    gt = _as_edge_map(gt)
    if tol_px is None:
        tol_px = default_tolerance(gt.shape)
    n_det = int(det.sum())
    n_gt = int(gt.sum())
    n_corr = match_edges(det, gt, tol_px)
    precision = 1.0 if n_det == 0 else n_corr / n_det
    recall = 1.0 if n_gt == 0 else n_corr / n_gt
    f = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return EvalReport(
        fom=fom(det, gt, beta),
        precision=precision,
        recall=recall,
        f=f,
        n_gt=n_gt,
        n_det=n_det,
        n_corr=n_corr,
        beta=beta,
        tolerance_px=tol_px,
    )


@dataclass
class PRCurve:
    """Threshold sweep samples plus curve summaries."""

    thresholds: list[float]
    precisions: list[float]
    recalls: list[float]
    fs: list[float]
    f_ods: float
    ods_threshold: float
    f_ois: float
    r50: float


def _aggregate_prf(n_corr: int, n_det: int, n_gt: int) -> tuple[float, float, float]:
    precision = 1.0 if n_det == 0 else n_corr / n_det
    recall = 1.0 if n_gt == 0 else n_corr / n_gt
    f = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return precision, recall, f


def _r50(precisions, recalls) -> float:
    """Max recall at precision >= 0.5, interpolating across crossings."""
    candidates = [r for p, r in zip(precisions, recalls) if p >= 0.5]
    for (p1, r1), (p2, r2) in zip(
        zip(precisions, recalls), zip(precisions[1:], recalls[1:])
    ):
        if (p1 - 0.5) * (p2 - 0.5) < 0:
            candidates.append(r1 + (r2 - r1) * (0.5 - p1) / (p2 - p1))
    return max(candidates) if candidates else 0.0


def ods_ois(strength_maps, gts, thresholds: int, tol_px: float | None = None) -> PRCurve:
    """Sweep binarization thresholds over a corpus of strength maps.

    Each map is thinned once, then binarized at `thresholds` uniformly
    spaced levels in (0, 1). Correspondence counts are aggregated over
    the corpus per level for the dataset-level curve; F_ODS is the best
    dataset F over levels, F_OIS aggregates counts at each image's own
    best level, and R50 is the recall achieved at precision 0.5.
    """
    if len(strength_maps) != len(gts):
        raise ValueError(
            f"got {len(strength_maps)} maps but {len(gts)} ground truths"
        )
    if len(strength_maps) == 0:
        raise ValueError("empty corpus")
    if thresholds < 2:
        raise ValueError(f"need at least 2 thresholds, got {thresholds}")

    levels = [(i + 1) / (thresholds + 1) for i in range(thresholds)]
    gts = [_as_edge_map(g) for g in gts]
    # counts[i][j] = (n_corr, n_det, n_gt) for image i at level j
    counts = []
    for strength, gt in zip(strength_maps, gts):
        thinned = nms(strength)
        tol = default_tolerance(gt.shape) if tol_px is None else tol_px
        per_level = []
        for t in levels:
            det = binarize(thinned, t, t)
            per_level.append(
                (match_edges(det, gt, tol), int(det.sum()), int(gt.sum()))
            )
        counts.append(per_level)

    precisions, recalls, fs = [], [], []
    for j in range(len(levels)):
        corr = sum(c[j][0] for c in counts)
        det = sum(c[j][1] for c in counts)
        gt_n = sum(c[j][2] for c in counts)
        p, r, f = _aggregate_prf(corr, det, gt_n)
        precisions.append(p)
        recalls.append(r)
        fs.append(f)

    best = int(np.argmax(fs))
    f_ods = fs[best]

    # Each image votes with the counts at its own best level.
    ois_corr = ois_det = ois_gt = 0
    for per_level in counts:
        image_fs = [_aggregate_prf(*c)[2] for c in per_level]
        j = int(np.argmax(image_fs))
        ois_corr += per_level[j][0]
        ois_det += per_level[j][1]
        ois_gt += per_level[j][2]
    f_ois = _aggregate_prf(ois_corr, ois_det, ois_gt)[2]

    return PRCurve(
        thresholds=levels,
        precisions=precisions,
        recalls=recalls,
        fs=fs,
        f_ods=f_ods,
        ods_threshold=levels[best],
        f_ois=f_ois,
        r50=_r50(precisions, recalls),
    )


def write_pr_csv(path, curve: PRCurve):
    """Write curve samples as CSV: threshold,precision,recall,f (6 dp, LF)."""
    with open(path, "w", newline="\n") as fh:
        fh.write("threshold,precision,recall,f\n")
        for t, p, r, f in zip(
            curve.thresholds, curve.precisions, curve.recalls, curve.fs
        ):
            fh.write(f"{t:.6f},{p:.6f},{r:.6f},{f:.6f}\n")
