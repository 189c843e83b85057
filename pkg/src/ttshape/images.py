"""Image ingestion and export.

Images load as float64 (height, width, 3) tensors with values in [0, 255].
PNG and binary PPM inputs are accepted; export is always PNG.
"""

from __future__ import annotations

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import IoFailure, UnsupportedFormat

_ACCEPTED_FORMATS = {"PNG", "PPM"}


def resize_longest_side(arr: np.ndarray, target: int) -> np.ndarray:
    """Aspect-preserving nearest-neighbor resize so the longer of
    (height, width) becomes `target`; the short side rounds half-up.

    Index math runs on exact integers, so the sampled source pixel for a
    given geometry never depends on floating point rounding.
    """
    if target < 1:
        raise ValueError("target size must be >= 1")
    h, w = arr.shape[:2]
    if h >= w:
        new_h = target
        new_w = max(1, (2 * w * target + h) // (2 * h))
    else:
        new_w = target
        new_h = max(1, (2 * h * target + w) // (2 * w))
    rows = (2 * np.arange(new_h) + 1) * h // (2 * new_h)
    cols = (2 * np.arange(new_w) + 1) * w // (2 * new_w)
    return np.ascontiguousarray(arr[np.ix_(rows, cols)])


def load_image(path, resize_longest: int | None = None) -> np.ndarray:
    try:
        with Image.open(path) as img:
            img.load()
            fmt = img.format
            rgb = img.convert("RGB")
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: not a readable image") from exc
    except OSError as exc:
        raise IoFailure(f"cannot read image {path}: {exc}") from exc
    if fmt not in _ACCEPTED_FORMATS:
        raise UnsupportedFormat(f"{path}: {fmt} input not supported, use PNG or PPM")
    arr = np.asarray(rgb, dtype=np.float64)
    if resize_longest is not None:
        arr = resize_longest_side(arr, int(resize_longest))
    return np.ascontiguousarray(arr)


def save_image(t, path) -> None:
    """Write a (height, width, 3) tensor as 8-bit PNG.

    Values are clamped to [0, 255] and rounded half-up; callers wanting
    metrics must compute them on the unclamped tensor beforehand.
    """
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise UnsupportedFormat(
            f"PNG export needs a (height, width, 3) tensor, got {arr.shape}"
        )
    pixels = np.floor(np.clip(arr, 0.0, 255.0) + 0.5).astype(np.uint8)
    try:
        Image.fromarray(pixels, mode="RGB").save(path, format="PNG")
    except OSError as exc:
        raise IoFailure(f"cannot write image {path}: {exc}") from exc
