"""Command-line interface.

Subcommands: detect (edge-strength or binary map), thin (suppress +
threshold), eval (fom / prf / curve), synth (test scenes with noise), and
bench (timing). Exit codes: 0 success, 1 usage error, 2 I/O error,
3 computation error.

All commands are deterministic: identical inputs and flags produce
bit-identical outputs regardless of the --threads setting, which only
caps worker parallelism.
"""

from __future__ import annotations

import argparse
import sys
import time

from .canny import canny, canny_strength
from .config import UsageError, build_detector_config
from .congruency import spectrum_congruency_map
from .io import (
    ImageFormatError,
    ingest_dataset,
    is_strength_raw,
    read_edge_map,
    read_image,
    read_strength_raw,
    write_edge_map,
    write_image,
    write_strength,
    write_strength_raw,
)
from .metrics import DEFAULT_BETA, default_tolerance, fom, ods_ois, prf, write_pr_csv
from .synth import add_gaussian_noise, make_shapes
from .thinning import binarize, nms

__all__ = ["main", "run_cli"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat 'key = value' config file")
    common.add_argument(
        "--threads",
        type=int,
        help="cap on worker threads (results do not depend on it)",
    )

    parser = _Parser(prog="speccon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", parents=[common], help="compute an edge map")
    detect.add_argument("--input", required=True)
    detect.add_argument("--method", choices=["sc", "canny"])
    detect.add_argument("--scales", help="comma-separated odd patch sides, e.g. 3,5,7")
    detect.add_argument("--alpha", help="noise factor for the energy threshold")
    detect.add_argument("--prefilter", help="Gaussian prefilter WINDOW:SIGMA")
    detect.add_argument("--sigma", help="canny smoothing sigma")
    detect.add_argument("--low", help="canny low hysteresis threshold")
    detect.add_argument("--high", help="canny high hysteresis threshold")
    detect.add_argument("--output", required=True)
    detect.add_argument("--raw", help="also write the lossless float sidecar here")

    thin = sub.add_parser("thin", parents=[common], help="suppress and threshold")
    thin.add_argument("--input", required=True)
    thin.add_argument("--low", type=float, required=True)
    thin.add_argument("--high", type=float, required=True)
    thin.add_argument("--output", required=True)

    evalp = sub.add_parser("eval", help="evaluate against ground truth")
    evalsub = evalp.add_subparsers(dest="metric", required=True)

    efom = evalsub.add_parser("fom", parents=[common])
    efom.add_argument("--det", required=True)
    efom.add_argument("--gt", required=True)
    efom.add_argument("--beta", type=float, default=DEFAULT_BETA)

    eprf = evalsub.add_parser("prf", parents=[common])
    eprf.add_argument("--det", required=True)
    eprf.add_argument("--gt", required=True)
    eprf.add_argument("--tol", type=float)

    ecurve = evalsub.add_parser("curve", parents=[common])
    ecurve.add_argument("--dataset", required=True)
    ecurve.add_argument("--method", choices=["sc", "canny"])
    ecurve.add_argument("--scales")
    ecurve.add_argument("--alpha")
    ecurve.add_argument("--prefilter")
    ecurve.add_argument("--sigma")
    ecurve.add_argument("--thresholds", type=int, required=True)
    ecurve.add_argument("--tol", type=float)
    ecurve.add_argument("--out", required=True)

    synth = sub.add_parser("synth", parents=[common], help="synthetic scene + noise")
    synth.add_argument("--width", type=int, required=True)
    synth.add_argument("--height", type=int, required=True)
    synth.add_argument("--sigma", type=float, required=True)
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--out", required=True)
    synth.add_argument("--gt", required=True)

    bench = sub.add_parser("bench", parents=[common], help="time the detector")
    bench.add_argument("--input", required=True)
    bench.add_argument("--iters", type=int, required=True)
    bench.add_argument("--scales")
    bench.add_argument("--alpha")
    bench.add_argument("--prefilter")

    return parser


def _read_strength(path):
    if is_strength_raw(path):
        return read_strength_raw(path)
    return read_image(path)


def _cmd_detect(args) -> int:
    cfg = build_detector_config(args)
    img = read_image(args.input)
    if cfg.method == "sc":
        strength = spectrum_congruency_map(img, cfg.scales, cfg.prefilter)
        write_strength(args.output, strength)
        if args.raw:
            write_strength_raw(args.raw, strength)
    else:
        edges = canny(img, cfg.sigma, cfg.low, cfg.high)
        write_edge_map(args.output, edges)
    return 0


def _cmd_thin(args) -> int:
    if not (0.0 <= args.low <= args.high <= 1.0):
        raise UsageError(
            f"--low/--high: need 0 <= low <= high <= 1, got {args.low}/{args.high}"
        )
    strength = _read_strength(args.input)
    thinned = nms(strength)
    write_edge_map(args.output, binarize(thinned, args.low, args.high))
    return 0


def _cmd_eval_fom(args) -> int:
    det = read_edge_map(args.det)
    gt = read_edge_map(args.gt)
    print(f"fom={fom(det, gt, args.beta):.6f}")
    return 0


def _cmd_eval_prf(args) -> int:
    det = read_edge_map(args.det)
    gt = read_edge_map(args.gt)
    tol = args.tol if args.tol is not None else default_tolerance(gt.shape)
    precision, recall, f = prf(det, gt, tol)
    print(f"precision={precision:.6f} recall={recall:.6f} f={f:.6f}")
    return 0


def _cmd_eval_curve(args) -> int:
    cfg = build_detector_config(args)
    entries = ingest_dataset(args.dataset)
    maps, gts = [], []
    for entry in entries:
        img = read_image(entry.image_path)
        gt = read_edge_map(entry.gt_path)
        if img.shape != gt.shape:
            raise ValueError(
                f"{entry.identifier}: image {img.shape} and ground truth "
                f"{gt.shape} dimensions differ"
            )
        if cfg.method == "sc":
            maps.append(spectrum_congruency_map(img, cfg.scales, cfg.prefilter))
        else:
            maps.append(canny_strength(img, cfg.sigma))
        gts.append(gt)
    curve = ods_ois(maps, gts, args.thresholds, cfg.tol)
    write_pr_csv(args.out, curve)
    print(f"ods={curve.f_ods:.6f} ois={curve.f_ois:.6f} r50={curve.r50:.6f}")
    return 0


def _cmd_synth(args) -> int:
    scene = make_shapes(args.width, args.height)
    noisy = add_gaussian_noise(scene.image, args.sigma, args.seed)
    write_image(args.out, noisy)
    write_edge_map(args.gt, scene.gt)
    return 0


def _cmd_bench(args) -> int:
    cfg = build_detector_config(args)
    img = read_image(args.input)
    if args.iters < 1:
        raise UsageError(f"--iters: must be at least 1, got {args.iters}")
    spectrum_congruency_map(img, cfg.scales, cfg.prefilter)  # warmup
    times = []
    for i in range(args.iters):
        start = time.perf_counter()
        spectrum_congruency_map(img, cfg.scales, cfg.prefilter)
        elapsed = time.perf_counter() - start
        times.append(elapsed)
        print(f"iter {i + 1}: {elapsed * 1000.0:.3f} ms")
    mean = sum(times) / len(times)
    pixels = img.shape[0] * img.shape[1]
    print(f"mean: {mean * 1000.0:.3f} ms")
    print(f"pixels/second: {pixels / mean:.0f}")
    return 0


_COMMANDS = {
    ("detect", None): _cmd_detect,
    ("thin", None): _cmd_thin,
    ("eval", "fom"): _cmd_eval_fom,
    ("eval", "prf"): _cmd_eval_prf,
    ("eval", "curve"): _cmd_eval_curve,
    ("synth", None): _cmd_synth,
    ("bench", None): _cmd_bench,
}


def run_cli(argv) -> int:
    """Run one command; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        handler = _COMMANDS[(args.command, getattr(args, "metric", None))]
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ImageFormatError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 3
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
