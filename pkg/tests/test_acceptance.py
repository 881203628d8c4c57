"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the verdict lines.
"""

import time

import numpy as np
import pytest

import speccon as sp
from speccon.congruency import EPS_GUARD
from speccon.io import read_strength_raw
from speccon.metrics import match_edges
from speccon.thinning import binarize, nms


def report(number, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"criterion {number:2d} [{name}]: {status}{suffix}")
    return ok


def test_01_basis_invariance():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        basis = sp.OrthonormalBasis.random(9, rng)
        for _ in range(20):
            vectors = rng.standard_normal((3, 9))
            e_id, a_id, sc_id = sp.congruency_of_vectors(vectors, threshold=0.3)
            projected = np.stack([basis.project(v) for v in vectors])
            e_b, a_b, sc_b = sp.congruency_of_vectors(projected, threshold=0.3)
            worst = max(worst, abs(e_b - e_id), abs(a_b - a_id), abs(sc_b - sc_id))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 5.0
    assert report(1, "basis invariance", ok, f"max diff {worst:.2e}, {elapsed:.2f}s")


def test_02_oracle_equivalence():
    rng = np.random.default_rng(102)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        img = rng.random((32, 32))
        for alpha in (0.0, 0.5):
            scales = sp.ScaleSet((3, 5, 7), alpha=alpha)
            fast = sp.spectrum_congruency_map(img, scales)
            naive = sp.spectrum_congruency_map_naive(img, scales)
            worst = max(worst, float(np.abs(fast - naive).max()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30.0
    assert report(2, "fast path vs naive oracle", ok, f"max diff {worst:.2e}, {elapsed:.1f}s")


def corpus_images():
    rng = np.random.default_rng(103)
    scene = sp.make_shapes(96, 96)
    step = np.zeros((64, 64))
    step[:, 32:] = 1.0
    return [
        rng.random((48, 48)),
        rng.random((32, 48)),
        scene.image,
        sp.add_gaussian_noise(scene.image, 50, seed=1),
        step,
        np.full((32, 32), 0.7),
    ]


def test_03_range_and_guards():
    ok = True
    detail = []
    for img in corpus_images():
        sc = sp.spectrum_congruency_map(img, sp.ScaleSet((3, 5, 7), alpha=0.5))
        ok &= float(sc.min()) >= 0.0 and float(sc.max()) <= 1.0
    const = sp.spectrum_congruency_map(np.full((40, 40), 0.3), sp.ScaleSet((3, 5, 7)))
    ok &= not const.any()
    detail.append("constant map all zero" if not const.any() else "constant map nonzero")
    assert report(3, "range and guards", ok, "; ".join(detail))


def test_04_brightness_and_contrast_invariance():
    rng = np.random.default_rng(104)
    scales = sp.ScaleSet((3, 5, 7), alpha=0.5)
    worst_shift = 0.0
    worst_scale = 0.0
    for _ in range(10):
        img = rng.random((32, 32)) * 0.5
        base = sp.spectrum_congruency_map(img, scales)
        shifted = sp.spectrum_congruency_map(img + 0.2, scales)
        doubled = sp.spectrum_congruency_map(2.0 * img, scales)
        worst_shift = max(worst_shift, float(np.abs(base - shifted).max()))
        worst_scale = max(worst_scale, float(np.abs(base - doubled).max()))
    ok = worst_shift <= 1e-10 and worst_scale <= 1e-9
    assert report(
        4, "brightness/contrast invariance", ok,
        f"shift {worst_shift:.2e}, scale {worst_scale:.2e}",
    )


def test_05_fom_unit_values():
    gt = np.zeros((16, 16), dtype=bool)
    gt[8, 3:12] = True
    perfect = sp.fom(gt, gt)

    single_gt = np.zeros((9, 9), dtype=bool)
    single_det = np.zeros((9, 9), dtype=bool)
    single_gt[4, 2] = True
    single_det[4, 5] = True
    displaced = sp.fom(single_det, single_gt, beta=1.0 / 9.0)

    ok = perfect == 1.0 and abs(displaced - 0.5) <= 1e-12
    assert report(5, "fom unit values", ok, f"perfect {perfect}, d=3 -> {displaced}")


# Detector settings for the noisy protocol: paper-range alpha, stronger
# orientation smoothing for NMS on noisy ridges, hysteresis thresholds.
NOISY_SCALES = (3, 5, 7)
NOISY_ALPHA = 1.0
NOISY_ORIENTATION = (7, 1.5)
NOISY_THRESHOLDS = (0.25, 0.45)
PREFILTER = (7, 3.5)


def test_06_noise_robustness_trend():
    start = time.perf_counter()
    scene = sp.make_shapes(256, 256)
    scales = sp.ScaleSet(NOISY_SCALES, alpha=NOISY_ALPHA)
    means = []
    for sigma in (30, 50, 100, 150):
        values = []
        for seed in range(5):
            noisy = sp.add_gaussian_noise(scene.image, sigma, seed)
            strength = sp.spectrum_congruency_map(noisy, scales, PREFILTER)
            thinned = nms(strength, orientation_smoothing=NOISY_ORIENTATION)
            edges = binarize(thinned, *NOISY_THRESHOLDS)
            values.append(sp.fom(edges, scene.gt))
        means.append(float(np.mean(values)))
    elapsed = time.perf_counter() - start
    f30, f50, f100, f150 = means
    chain = f30 > f50 - 0.02 and f50 >= f100 - 0.02 and f100 >= f150 - 0.02
    ok = chain and f150 >= 0.5 and elapsed < 60.0
    assert report(
        6, "noise robustness trend", ok,
        "fom " + " ".join(f"{m:.3f}" for m in means) + f", {elapsed:.1f}s",
    )


def test_07_step_edge_localization_as_stated():
    """Ideal 0|1 vertical step, alpha = 0, NMS + binarize(0.5, 0.5).

    With alpha = 0, pixels where only the largest scale sees the step
    have energy equal to amplitude, so the strength is exactly 1.0 at
    distance ~S_K/2 from the step on both sides; those flanks out-rank
    the crest and survive suppression. The criterion as stated therefore
    cannot hold; it is kept faithful here and expected to fail. See the
    companion test below for the documented working configuration.
    """
    img = np.zeros((64, 64))
    img[:, 32:] = 1.0
    strength = sp.spectrum_congruency_map(img, sp.ScaleSet((3, 5, 7), alpha=0.0))
    edges = binarize(nms(strength), 0.5, 0.5)
    ok = True
    for r in range(4, 60):
        cols = np.flatnonzero(edges[r])
        near = [c for c in cols if abs(c - 31.5) <= 1.0]
        ok &= len(cols) == 1 and len(near) == 1
    report(7, "step localization (alpha=0, as stated)", ok)
    assert ok


def test_07b_step_edge_localization_documented_variant():
    """Sub-pixel step with the documented noise threshold localizes to
    exactly one pixel per row at the boundary."""
    img = np.zeros((64, 64))
    img[:, 32] = 0.55
    img[:, 33:] = 1.0
    strength = sp.spectrum_congruency_map(img, sp.ScaleSet((3, 5, 7), alpha=0.5))
    edges = binarize(nms(strength), 0.5, 0.5)
    ok = True
    for r in range(4, 60):
        cols = np.flatnonzero(edges[r])
        ok &= len(cols) == 1 and abs(cols[0] - 32) <= 1.0
    assert report(7, "step localization (documented variant)", ok)


def test_08_single_scale_degenerate():
    rng = np.random.default_rng(108)
    img = rng.random((24, 24))
    scales = sp.ScaleSet((3,), alpha=0.0)
    strength = sp.spectrum_congruency_map(img, scales)
    amplitude = sp.field_energy(sp.patch_field(img, scales)).amplitude_sum
    live = amplitude >= EPS_GUARD
    ok = bool(np.all(strength[live] == 1.0)) and bool(live.any())
    assert report(8, "single-scale degenerate case", ok)


def independent_sweep(maps, gts, thresholds, tol):
    """Brute-force re-implementation of the threshold sweep."""
    levels = [(i + 1) / (thresholds + 1) for i in range(thresholds)]

    def agg(corr, det, gt_n):
        p = 1.0 if det == 0 else corr / det
        r = 1.0 if gt_n == 0 else corr / gt_n
        f = 0.0 if p + r == 0 else 2 * p * r / (p + r)
        return p, r, f

    per_image = []
    for strength, gt in zip(maps, gts):
        thinned = nms(strength)
        per_image.append(
            [
                (
                    match_edges(binarize(thinned, t, t), gt, tol),
                    int(binarize(thinned, t, t).sum()),
                    int(gt.sum()),
                )
                for t in levels
            ]
        )
    dataset = []
    for j in range(len(levels)):
        corr = sum(rows[j][0] for rows in per_image)
        det = sum(rows[j][1] for rows in per_image)
        gt_n = sum(rows[j][2] for rows in per_image)
        dataset.append(agg(corr, det, gt_n))
    fs = [f for _, _, f in dataset]
    best = int(np.argmax(fs))
    totals = [0, 0, 0]
    for rows in per_image:
        j = int(np.argmax([agg(*row)[2] for row in rows]))
        totals = [a + b for a, b in zip(totals, rows[j])]
    return levels, dataset, fs[best], agg(*totals)[2]


def test_09_evaluation_pipeline():
    rng = np.random.default_rng(109)
    maps, gts = [], []
    for k in range(3):
        strength = np.zeros((24, 24))
        col = 6 + 5 * k
        strength[:, col] = rng.uniform(0.55, 0.95)
        strength[:, col + 2] = rng.uniform(0.1, 0.35)
        strength += rng.random((24, 24)) * 0.05
        gt = np.zeros((24, 24), dtype=bool)
        gt[:, col] = True
        maps.append(strength)
        gts.append(gt)

    curve = sp.ods_ois(maps, gts, thresholds=5, tol_px=2.0)
    levels, dataset, f_ods, f_ois = independent_sweep(maps, gts, 5, 2.0)
    exact = (
        curve.thresholds == levels
        and all(
            curve.precisions[j] == dataset[j][0]
            and curve.recalls[j] == dataset[j][1]
            and curve.fs[j] == dataset[j][2]
            for j in range(5)
        )
        and curve.f_ods == f_ods
        and curve.f_ois == f_ois
    )
    ordered = curve.f_ois >= curve.f_ods
    single = sp.ods_ois(maps[:1], gts[:1], thresholds=5, tol_px=2.0)
    ordered &= single.f_ois >= single.f_ods
    ok = exact and ordered
    assert report(
        9, "evaluation pipeline", ok,
        f"bit-exact={exact}, f_ois {curve.f_ois:.4f} >= f_ods {curve.f_ods:.4f}",
    )


def test_10_performance():
    rng = np.random.default_rng(110)
    scales = sp.ScaleSet((3, 5, 7), alpha=0.5)

    bsds = rng.random((321, 481))
    sp.spectrum_congruency_map(bsds, scales)  # warmup
    start = time.perf_counter()
    sp.spectrum_congruency_map(bsds, scales)
    bsds_time = time.perf_counter() - start

    square = rng.random((256, 256))
    start = time.perf_counter()
    sp.spectrum_congruency_map(square, scales)
    fast_time = time.perf_counter() - start
    start = time.perf_counter()
    sp.spectrum_congruency_map_naive(square, scales)
    naive_time = time.perf_counter() - start

    ratio = naive_time / fast_time
    ok = bsds_time < 1.0 and ratio >= 5.0
    assert report(
        10, "performance", ok,
        f"481x321 in {bsds_time * 1000:.0f} ms, speedup {ratio:.0f}x",
    )


def test_11_cli_determinism(tmp_path, capsys):
    from speccon.cli import run_cli
    from speccon.io import write_edge_map, write_image

    def run_twice(argv, outputs):
        blobs = []
        for attempt in ("x", "y"):
            paths = {key: tmp_path / f"{attempt}_{name}" for key, name in outputs.items()}
            args = [a.format(**{k: str(v) for k, v in paths.items()}) for a in argv]
            assert run_cli(args) == 0
            blobs.append({key: paths[key].read_bytes() for key in paths})
        return blobs[0] == blobs[1]

    ok = True

    # synth twice
    ok &= run_twice(
        ["synth", "--width", "72", "--height", "64", "--sigma", "25", "--seed", "3",
         "--out", "{img}", "--gt", "{gt}"],
        {"img": "scene.pgm", "gt": "gt.png"},
    )

    scene = sp.make_shapes(72, 64)
    write_image(tmp_path / "input.pgm", scene.image)
    write_edge_map(tmp_path / "gt0.png", scene.gt)

    # detect (sc) across thread counts
    blobs = []
    for threads in ("1", "2", "4"):
        out = tmp_path / f"sc_{threads}.pgm"
        raw = tmp_path / f"sc_{threads}.scf"
        assert run_cli(
            ["detect", "--input", str(tmp_path / "input.pgm"), "--threads", threads,
             "--output", str(out), "--raw", str(raw)]
        ) == 0
        blobs.append(out.read_bytes() + raw.read_bytes())
    ok &= blobs[0] == blobs[1] == blobs[2]

    # detect (canny) twice
    ok &= run_twice(
        ["detect", "--input", str(tmp_path / "input.pgm"), "--method", "canny",
         "--low", "0.2", "--high", "0.4", "--output", "{out}"],
        {"out": "canny.png"},
    )

    # thin twice from the raw sidecar
    ok &= run_twice(
        ["thin", "--input", str(tmp_path / "sc_1.scf"), "--low", "0.3",
         "--high", "0.5", "--output", "{out}"],
        {"out": "etm.png"},
    )

    # eval curve twice
    root = tmp_path / "data"
    (root / "images").mkdir(parents=True)
    (root / "gt").mkdir()
    write_image(root / "images" / "a.pgm", scene.image)
    write_edge_map(root / "gt" / "a.png", scene.gt)
    ok &= run_twice(
        ["eval", "curve", "--dataset", str(root), "--method", "sc",
         "--thresholds", "4", "--out", "{csv}"],
        {"csv": "curve.csv"},
    )

    capsys.readouterr()  # swallow CLI prints before the verdict line
    assert report(11, "cli determinism", ok)
