"""Binary PGM (P5) reading/writing and pixel <-> real conversions.

Images are plain 2-D numpy arrays: ``uint8`` of shape ``(height, width)`` for
pixel images, ``float64`` of the same shape for real-valued working images.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

__all__ = [
    "PGMError",
    "PGMHeaderError",
    "PGMMaxvalError",
    "PGMTruncatedError",
    "read_pgm",
    "write_pgm",
    "to_real",
    "from_real",
    "round_half_away",
    "check_image",
]


class PGMError(ValueError):
    """Base class for PGM parse failures."""


class PGMHeaderError(PGMError):
    """Bad magic number or malformed header fields."""


class PGMMaxvalError(PGMError):
    """maxval other than 255."""


class PGMTruncatedError(PGMError):
    """Fewer pixel bytes than the header promises."""


_WHITESPACE = b" \t\r\n\v\f"


def _header_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Return ``count`` header tokens and the offset of the raster.

    Comments run from ``#`` to end of line. Exactly one whitespace byte
    separates the final token (maxval) from the raster.
    """
    tokens: list[bytes] = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos] in _WHITESPACE:
            pos += 1
        if pos < n and data[pos] == ord("#"):
            while pos < n and data[pos] not in b"\r\n":
                pos += 1
            continue
        start = pos
        while pos < n and data[pos] not in _WHITESPACE and data[pos] != ord("#"):
            pos += 1
        if start == pos:
            raise PGMHeaderError("unexpected end of header")
        tokens.append(data[start:pos])
    if pos >= n or data[pos] not in _WHITESPACE:
        raise PGMHeaderError("missing whitespace after maxval")
    return tokens, pos + 1


def read_pgm(path: str | os.PathLike) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:2] != b"P5" or len(data) < 3 or data[2] not in _WHITESPACE:
        raise PGMHeaderError(f"bad magic {data[:3]!r}, expected b'P5'")
    tokens, offset = _header_tokens(data[2:], 3)
    offset += 2
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise PGMHeaderError(f"non-integer header field: {exc}") from None
    if width <= 0 or height <= 0:
        raise PGMHeaderError(f"invalid dimensions {width}x{height}")
    if maxval != 255:
        raise PGMMaxvalError(f"unsupported maxval {maxval}")
    size = width * height
    raster = data[offset : offset + size]
    if len(raster) < size:
        raise PGMTruncatedError(
            f"truncated pixel data: expected {size} bytes, got {len(raster)}"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(img: np.ndarray, path: str | os.PathLike) -> None:
    img = check_image(img)
    height, width = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())


def check_image(img: np.ndarray) -> np.ndarray:
    """Validate an 8-bit grayscale image array and return it as uint8."""
    img = np.asarray(img)
    if img.ndim != 2 or img.shape[0] == 0 or img.shape[1] == 0:
        raise ValueError(f"expected a non-empty 2-D grayscale image, got shape {img.shape}")
    if img.dtype != np.uint8:
        if not np.issubdtype(img.dtype, np.integer) or img.min() < 0 or img.max() > 255:
            raise ValueError("pixel values must be integers in [0, 255]")
        img = img.astype(np.uint8)
    return img


def to_real(img: np.ndarray) -> np.ndarray:
    return check_image(img).astype(np.float64)


def round_half_away(values: np.ndarray) -> np.ndarray:
    # np.round is half-to-even; pixels need half-away-from-zero.
    values = np.asarray(values, dtype=np.float64)
    return np.copysign(np.floor(np.abs(values) + 0.5), values)


def from_real(values: np.ndarray) -> np.ndarray:
    """Quantize a real image: round half away from zero, then clamp to [0, 255]."""
    return np.clip(round_half_away(values), 0, 255).astype(np.uint8)
