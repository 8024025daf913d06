"""Substitute 512x512 grayscale cover set built from scikit-image's bundled photos.

The classic grayscale test images are not redistributable here. These four
natural photographs stand in for them:
a portrait, an outdoor scene with a figure, a still life, and an animal.
Requires scikit-image (a test extra).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .image_io import from_real, write_pgm

__all__ = ["COVER_NAMES", "load_cover", "load_covers", "write_covers"]

COVER_NAMES = ("astronaut", "camera", "coffee", "chelsea")
SIDE = 512


def _to_gray(rgb: np.ndarray) -> np.ndarray:
    from skimage.color import rgb2gray

    return rgb2gray(rgb[..., :3]) * 255.0


def load_cover(name: str) -> np.ndarray:
    """Return cover ``name`` as a 512x512 uint8 array."""
    try:
        from skimage import data, transform
    except ImportError as exc:  # pragma: no cover
        raise RuntimeError("scikit-image is needed for the built-in cover set") from exc
    if name not in COVER_NAMES:
        raise KeyError(f"unknown cover {name!r}; choose from {COVER_NAMES}")
    img = getattr(data, name)()
    real = _to_gray(img) if img.ndim == 3 else img.astype(np.float64)
    h, w = real.shape
    side = min(h, w)
    top, left = (h - side) // 2, (w - side) // 2
    real = real[top : top + side, left : left + side]
    if side != SIDE:
        real = transform.resize(real, (SIDE, SIDE), order=1, anti_aliasing=True, preserve_range=True)
    return from_real(real)


def load_covers() -> dict[str, np.ndarray]:
    return {name: load_cover(name) for name in COVER_NAMES}


def write_covers(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, img in load_covers().items():
        path = directory / f"{name}.pgm"
        write_pgm(img, path)
        paths.append(path)
    return paths
