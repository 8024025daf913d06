"""PSNR and bit-error rate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image_io import check_image

__all__ = ["PEAK", "QualityReport", "mse", "psnr", "ber", "bits_wrong", "quality_report"]

PEAK = 255.0


def mse(a: np.ndarray, b: np.ndarray) -> float:
    a, b = check_image(a), check_image(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    diff = a.astype(np.int64) - b.astype(np.int64)
    return float(np.sum(diff * diff)) / diff.size


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """PSNR in dB with peak 255; ``math.inf`` for identical images."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / err)


def _bits(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise ValueError("bit streams may only contain 0 and 1")
    return arr.astype(np.uint8)


def bits_wrong(sent, received) -> int:
    s, r = _bits(sent), _bits(received)
    if s.size != r.size:
        raise ValueError(f"length mismatch: {s.size} vs {r.size}")
    return int(np.count_nonzero(s != r))


def ber(sent, received) -> float:
    """Bit-error rate in percent."""
    n = _bits(sent).size
    if n == 0:
        raise ValueError("empty bit stream")
    return 100.0 * bits_wrong(sent, received) / n


@dataclass(frozen=True)
class QualityReport:
    psnr: float
    mse: float
    ber_percent: float
    bits_total: int
    bits_wrong: int


def quality_report(original, distorted, sent, received) -> QualityReport:
    wrong = bits_wrong(sent, received)
    total = _bits(sent).size
    return QualityReport(
        psnr=psnr(original, distorted),
        mse=mse(original, distorted),
        ber_percent=100.0 * wrong / total,
        bits_total=total,
        bits_wrong=wrong,
    )
