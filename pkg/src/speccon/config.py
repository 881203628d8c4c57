"""Detector configuration and the flat key = value config file.

Precedence for every key is: command-line flag, then config file, then
built-in default. The config file holds one `key = value` pair per line;
blank lines and lines starting with '#' are ignored.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

from .patches import DEFAULT_SCALES, ScaleSet

__all__ = [
    "CONFIG_KEYS",
    "DetectorConfig",
    "UsageError",
    "build_detector_config",
    "parse_config_file",
    "parse_prefilter",
    "parse_scales",
]

CONFIG_KEYS = (
    "method",
    "scales",
    "alpha",
    "prefilter",
    "low",
    "high",
    "sigma",
    "tol",
    "threads",
)

DEFAULTS = {
    "method": "sc",
    "scales": ",".join(str(s) for s in DEFAULT_SCALES),
    "alpha": 0.5,
    "prefilter": None,
    "low": 0.1,
    "high": 0.2,
    "sigma": math.sqrt(2),
    "tol": None,
    "threads": None,
}


class UsageError(Exception):
    """Bad command line or config value; maps to exit code 1."""


@dataclass
class DetectorConfig:
    """Resolved settings for one detector invocation."""

    method: str
    scales: ScaleSet
    prefilter: tuple[int, float] | None
    low: float
    high: float
    sigma: float
    tol: float | None
    threads: int

    def __post_init__(self):
        if self.method not in ("sc", "canny"):
            raise UsageError(f"--method: expected 'sc' or 'canny', got {self.method!r}")
        if not (0.0 <= self.low <= self.high <= 1.0):
            raise UsageError(
                f"--low/--high: need 0 <= low <= high <= 1, got {self.low}/{self.high}"
            )
        if self.sigma <= 0:
            raise UsageError(f"--sigma: must be positive, got {self.sigma}")
        if self.threads < 1:
            raise UsageError(f"--threads: must be at least 1, got {self.threads}")


def parse_scales(text: str) -> tuple[int, ...]:
    try:
        sides = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--scales: expected comma-separated integers, got {text!r}") from exc
    return sides


def parse_prefilter(text: str) -> tuple[int, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"--prefilter: expected WINDOW:SIGMA, got {text!r}")
    try:
        return int(parts[0]), float(parts[1])
    except ValueError as exc:
        raise UsageError(f"--prefilter: expected WINDOW:SIGMA, got {text!r}") from exc


def parse_config_file(path) -> dict[str, str]:
    path = Path(path)
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _pick(flag, file_values: dict, key: str):
    if flag is not None:
        return flag, True
    if key in file_values:
        return file_values[key], False
    return DEFAULTS[key], False


def build_detector_config(args) -> DetectorConfig:
    """Merge argparse namespace, optional config file, and defaults."""
    file_values = {}
    if getattr(args, "config", None):
        file_values = parse_config_file(args.config)

    method, _ = _pick(getattr(args, "method", None), file_values, "method")

    scales_raw, _ = _pick(getattr(args, "scales", None), file_values, "scales")
    sides = parse_scales(scales_raw) if isinstance(scales_raw, str) else scales_raw
    alpha_raw, _ = _pick(getattr(args, "alpha", None), file_values, "alpha")
    try:
        alpha = float(alpha_raw)
    except ValueError as exc:
        raise UsageError(f"--alpha: expected a number, got {alpha_raw!r}") from exc
    try:
        scales = ScaleSet(sides=sides, alpha=alpha)
    except ValueError as exc:
        raise UsageError(f"--scales/--alpha: {exc}") from exc

    prefilter_raw, _ = _pick(getattr(args, "prefilter", None), file_values, "prefilter")
    prefilter = None
    if prefilter_raw is not None:
        prefilter = (
            parse_prefilter(prefilter_raw)
            if isinstance(prefilter_raw, str)
            else prefilter_raw
        )

    def number(key, caster):
        raw, _ = _pick(getattr(args, key, None), file_values, key)
        if raw is None:
            return None
        try:
            return caster(raw)
        except ValueError as exc:
            raise UsageError(f"--{key}: expected a number, got {raw!r}") from exc

    low = number("low", float)
    high = number("high", float)
    sigma = number("sigma", float)
    tol = number("tol", float)

    threads = number("threads", int)
    if threads is None:
        env = os.environ.get("SPECCON_THREADS")
        if env is not None:
            try:
                threads = int(env)
            except ValueError as exc:
                raise UsageError(f"SPECCON_THREADS: expected an integer, got {env!r}") from exc
        else:
            threads = os.cpu_count() or 1

    return DetectorConfig(
        method=method,
        scales=scales,
        prefilter=prefilter,
        low=low,
        high=high,
        sigma=sigma,
        tol=tol,
        threads=threads,
    )
