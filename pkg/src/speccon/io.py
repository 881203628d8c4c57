"""Image and edge-map file formats, plus dataset ingestion.

Supported containers are binary PGM (P5, maxval 255 or 65535, big-endian
as the format requires) and grayscale PNG. Loaded samples are scaled to
[0, 1] (by 1/255 or 1/65535). Strength maps are written as 16-bit with
round-half-to-even quantization so golden files are portable; a lossless
float32 sidecar ("SCF1") exists for bit-exact regression work. Edge maps
are written as 8-bit {0, 255}.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from .image import as_image, to_grayscale

__all__ = [
    "DatasetEntry",
    "ImageFormatError",
    "ingest_dataset",
    "read_edge_map",
    "read_image",
    "read_strength_raw",
    "write_edge_map",
    "write_image",
    "write_strength",
    "write_strength_raw",
]

RAW_MAGIC = b"SCF1"

SUPPORTED_EXTENSIONS = (".pgm", ".png")


class ImageFormatError(Exception):
    """A file could not be decoded as a supported image format."""


def _quantize(a: np.ndarray, maxval: int) -> np.ndarray:
    scaled = np.clip(a, 0.0, 1.0) * maxval
    return np.rint(scaled)  # rint rounds half to even


# -- PGM ---------------------------------------------------------------------


def _read_pgm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    pos = 0

    def next_token():
        nonlocal pos
        while pos < len(data):
            ch = data[pos : pos + 1]
            if ch == b"#":
                eol = data.find(b"\n", pos)
                pos = len(data) if eol < 0 else eol + 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError(f"{path}: truncated header")
        return data[start:pos]

    magic = next_token()
    if magic != b"P5":
        raise ImageFormatError(f"{path}: bad magic {magic!r}, expected P5")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError as exc:
        raise ImageFormatError(f"{path}: malformed header") from exc
    if width < 1 or height < 1:
        raise ImageFormatError(f"{path}: bad dimensions {width}x{height}")
    if maxval not in (255, 65535):
        raise ImageFormatError(f"{path}: unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval == 65535 else np.dtype("u1")
    expected = width * height * dtype.itemsize
    raster = data[pos : pos + expected]
    if len(raster) < expected:
        raise ImageFormatError(
            f"{path}: truncated raster, expected {expected} bytes, got {len(raster)}"
        )
    samples = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    return samples.astype(np.float64) / maxval


def _write_pgm(path: Path, a: np.ndarray, maxval: int):
    values = _quantize(a, maxval)
    header = f"P5\n{a.shape[1]} {a.shape[0]}\n{maxval}\n".encode("ascii")
    dtype = np.dtype(">u2") if maxval == 65535 else np.dtype("u1")
    path.write_bytes(header + values.astype(dtype).tobytes())


# -- PNG ---------------------------------------------------------------------


def _read_png(path: Path) -> np.ndarray:
    try:
        with PILImage.open(path) as im:
            im.load()
            mode = im.mode
            if mode == "P":
                im = im.convert("L")
                mode = "L"
            if mode in ("RGB", "RGBA"):
                rgb = np.asarray(im)[..., :3]
                return to_grayscale(rgb)
            arr = np.asarray(im)
    except ImageFormatError:
        raise
    except Exception as exc:
        raise ImageFormatError(f"{path}: not a decodable PNG ({exc})") from exc
    if arr.ndim != 2:
        raise ImageFormatError(f"{path}: unsupported PNG layout {arr.shape}")
    if arr.dtype == np.uint8:
        return arr.astype(np.float64) / 255.0
    return arr.astype(np.float64) / 65535.0


def _write_png(path: Path, a: np.ndarray, maxval: int):
    values = _quantize(a, maxval)
    if maxval == 255:
        PILImage.fromarray(values.astype(np.uint8), mode="L").save(path)
    else:
        PILImage.fromarray(values.astype(np.uint16)).save(path)


# -- public API --------------------------------------------------------------


def read_image(path) -> np.ndarray:
    """Read a grayscale image, scaled to [0, 1]."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".pgm":
        return _read_pgm(path)
    if ext == ".png":
        return _read_png(path)
    raise ImageFormatError(f"{path}: unsupported extension {ext!r}")


def write_image(path, img, *, bits: int = 8):
    """Write an image quantized to 8 or 16 bits (container by extension)."""
    path = Path(path)
    img = as_image(img)
    if bits not in (8, 16):
        raise ValueError(f"bits must be 8 or 16, got {bits}")
    maxval = 255 if bits == 8 else 65535
    ext = path.suffix.lower()
    if ext == ".pgm":
        _write_pgm(path, img, maxval)
    elif ext == ".png":
        _write_png(path, img, maxval)
    else:
        raise ImageFormatError(f"{path}: unsupported extension {ext!r}")


def write_strength(path, strength):
    """Write an edge-strength map as a 16-bit image."""
    write_image(path, strength, bits=16)


def read_edge_map(path) -> np.ndarray:
    """Read a binary edge map: any nonzero sample is an edge pixel."""
    return read_image(path) > 0


def write_edge_map(path, edges):
    """Write a boolean edge map as 8-bit {0, 255}."""
    edges = np.asarray(edges)
    if edges.ndim != 2:
        raise ValueError(f"edge map must be 2-D, got shape {edges.shape}")
    write_image(path, edges.astype(np.float64), bits=8)


def write_strength_raw(path, strength):
    """Write the lossless float32 sidecar (magic SCF1, little-endian)."""
    strength = as_image(strength)
    h, w = strength.shape
    header = RAW_MAGIC + struct.pack("<III", w, h, 0)
    Path(path).write_bytes(header + strength.astype("<f4").tobytes())


def read_strength_raw(path) -> np.ndarray:
    """Read an SCF1 sidecar back as float32 values (in a float64 array)."""
    data = Path(path).read_bytes()
    if data[:4] != RAW_MAGIC:
        raise ImageFormatError(f"{path}: bad magic {data[:4]!r}, expected SCF1")
    if len(data) < 16:
        raise ImageFormatError(f"{path}: truncated header")
    w, h, reserved = struct.unpack("<III", data[4:16])
    if reserved != 0:
        raise ImageFormatError(f"{path}: bad reserved field {reserved}")
    expected = 16 + 4 * w * h
    if len(data) < expected:
        raise ImageFormatError(f"{path}: truncated raster")
    floats = np.frombuffer(data[16:expected], dtype="<f4").reshape(h, w)
    return floats.astype(np.float64)


def is_strength_raw(path) -> bool:
    """Check whether a file starts with the SCF1 magic."""
    try:
        with open(path, "rb") as fh:
            return fh.read(4) == RAW_MAGIC
    except OSError:
        return False


# -- datasets ----------------------------------------------------------------


@dataclass
class DatasetEntry:
    """One image / ground-truth pair, keyed by the shared file stem."""

    identifier: str
    image_path: Path
    gt_path: Path


def ingest_dataset(root) -> list[DatasetEntry]:
    """Pair up files from <root>/images and <root>/gt by shared stem.

    Entries come back sorted by identifier; unmatched files on either
    side are reported as warnings. Zero pairs is an error.
    """
    root = Path(root)
    images_dir = root / "images"
    gt_dir = root / "gt"
    if not images_dir.is_dir() or not gt_dir.is_dir():
        raise FileNotFoundError(f"{root}: expected images/ and gt/ subdirectories")

    def collect(d):
        return {
            p.stem: p
            for p in sorted(d.iterdir())
            if p.suffix.lower() in SUPPORTED_EXTENSIONS
        }

    images = collect(images_dir)
    gts = collect(gt_dir)
    entries = [
        DatasetEntry(identifier=stem, image_path=images[stem], gt_path=gts[stem])
        for stem in sorted(images.keys() & gts.keys())
    ]
    for stem in sorted(images.keys() ^ gts.keys()):
        side = "ground truth" if stem in images else "image"
        warnings.warn(f"{root}: no matching {side} for '{stem}'", stacklevel=2)
    if not entries:
        raise ValueError(f"{root}: no matched image/ground-truth pairs")
    return entries
