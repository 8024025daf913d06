"""Block complexity: Canny edge counts and first-level approximation spread.

The edge count classifies blocks as complex or smooth. The standard deviation
of the level-1 approximation subband drives the per-block strength factor
``alpha = max(sigma ** gamma, alpha_min)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import kernels
from .haar import BLOCK, block_view, dwt2_level
from .image_io import check_image

__all__ = [
    "CannyParams",
    "BlockComplexity",
    "gaussian_kernel1d",
    "canny",
    "block_edge_counts",
    "classify_complex",
    "sigma_a",
    "sigma_a_from_level1",
    "strength_factor",
    "block_complexity",
]

_TAN_22_5 = math.sqrt(2.0) - 1.0
_SOBEL = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])


@dataclass(frozen=True)
class CannyParams:
    gaussian_sigma: float = 1.4
    high_fraction: float = 0.2
    low_fraction: float = 0.08

    def __post_init__(self):
        if not self.gaussian_sigma > 0:
            raise ValueError("gaussian_sigma must be > 0")
        if not 0 < self.low_fraction < self.high_fraction < 1:
            raise ValueError("need 0 < low_fraction < high_fraction < 1")

    @property
    def kernel_side(self) -> int:
        return 2 * math.ceil(3 * self.gaussian_sigma) + 1


@dataclass(frozen=True)
class BlockComplexity:
    block_index: int
    edge_count: int
    is_complex: bool
    sigma_A: float
    alpha: float


def gaussian_kernel1d(sigma: float) -> np.ndarray:
    """Normalized 1-D Gaussian taps, side ``2*ceil(3*sigma) + 1``."""
    radius = math.ceil(3 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (x / sigma) ** 2)
    return k / k.sum()


def _gradient_bins(gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Quantize gradient direction: 0 horizontal, 1 diagonal (down-right),
    2 vertical, 3 anti-diagonal (down-left). Rows grow downward."""
    ax, ay = np.abs(gx), np.abs(gy)
    bins = np.where(gx * gy > 0, 1, 3).astype(np.int8)
    bins[ax <= _TAN_22_5 * ay] = 2
    bins[ay <= _TAN_22_5 * ax] = 0
    return bins


_MAG_FLOOR = 1e-9


def canny(img: np.ndarray, params: CannyParams = CannyParams(), backend=None) -> np.ndarray:
    """Boolean edge map of ``img`` (same shape)."""
    img = check_image(img)
    side = params.kernel_side
    if min(img.shape) < side:
        raise ValueError(
            f"image {img.shape[1]}x{img.shape[0]} is smaller than the {side}x{side} smoothing kernel"
        )
    k = backend or kernels.backend
    g = gaussian_kernel1d(params.gaussian_sigma)
    smooth = ndimage.correlate1d(img.astype(np.float64), g, axis=0, mode="nearest")
    smooth = ndimage.correlate1d(smooth, g, axis=1, mode="nearest")
    gx = ndimage.correlate(smooth, _SOBEL, mode="nearest")
    gy = ndimage.correlate(smooth, _SOBEL.T, mode="nearest")
    mag = np.hypot(gx, gy)
    # round-off from smoothing a flat region is ~1e-13; a unit step gives ~1e-1
    mag[mag < _MAG_FLOOR] = 0.0
    peak = mag.max()
    if peak <= 0:
        return np.zeros(img.shape, dtype=bool)
    thin = k.nms(mag, _gradient_bins(gx, gy))
    strong = thin >= params.high_fraction * peak
    weak = thin >= params.low_fraction * peak
    return np.asarray(k.hysteresis(strong, weak), dtype=bool)


def block_edge_counts(edges: np.ndarray) -> np.ndarray:
    """Edge pixels per 8x8 block, row-major block order."""
    edges = np.asarray(edges, dtype=bool)
    return block_view(edges).sum(axis=(2, 3)).reshape(-1).astype(np.int64)


def classify_complex(counts) -> np.ndarray:
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size == 0:
        raise ValueError("classify_complex needs at least one block count")
    # compare count*n with the total to avoid a rounded mean
    return counts * counts.size > counts.sum()


def sigma_a(block: np.ndarray) -> float:
    """Population standard deviation of the 16 level-1 cA coefficients of an 8x8 block."""
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (BLOCK, BLOCK):
        raise ValueError(f"expected an 8x8 block, got {block.shape}")
    return float(np.std(dwt2_level(block).cA))


def sigma_a_from_level1(level1_ca: np.ndarray) -> np.ndarray:
    """Vectorized ``sigma_a`` from per-block level-1 cA rows ``(nb, 16)``."""
    return np.std(level1_ca, axis=-1)


def strength_factor(sigma, gamma: float, alpha_min: float):
    """``max(sigma ** gamma, alpha_min)``; works on scalars and arrays."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if not alpha_min > 0:
        raise ValueError(f"alpha_min must be > 0, got {alpha_min}")
    sigma = np.asarray(sigma, dtype=np.float64)
    if np.any(sigma < 0):
        raise ValueError("sigma must be >= 0")
    out = np.maximum(np.power(sigma, gamma), alpha_min)
    return float(out) if out.ndim == 0 else out


def block_complexity(
    img: np.ndarray,
    gamma: float = 0.4,
    alpha_min: float = 0.5,
    canny_params: CannyParams = CannyParams(),
) -> list[BlockComplexity]:
    """Per-block diagnostics (edge count, class, sigma, unscaled alpha)."""
    img = check_image(img)
    counts = block_edge_counts(canny(img, canny_params))
    flags = classify_complex(counts)
    level1, _ = kernels.backend.block_analysis(img.astype(np.float64))
    sigmas = sigma_a_from_level1(level1)
    alphas = strength_factor(sigmas, gamma, alpha_min)
    return [
        BlockComplexity(i, int(c), bool(f), float(s), float(a))
        for i, (c, f, s, a) in enumerate(zip(counts, flags, sigmas, np.atleast_1d(alphas)))
    ]
