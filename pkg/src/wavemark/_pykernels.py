"""Pure-Python (numpy/scipy) implementations of the hot kernels.

Same signatures and bit-identical results as the compiled ``_ckernels``.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage

from .haar import block_view, pyramid_forward

NAME = "python"

# neighbour offsets (dr, dc) per quantized gradient direction
_NMS_OFFSETS = ((0, 1), (1, 1), (1, 0), (1, -1))


def block_analysis(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-block level-1 cA (nb, 16) and level-3 (cA, cH, cV) (nb, 3), row-major block order."""
    blocks = block_view(np.asarray(x, dtype=np.float64)).reshape(-1, 8, 8)
    p = pyramid_forward(blocks)
    l1 = p.level1.cA.reshape(-1, 16)
    l3 = np.stack([p.level3.cA, p.level3.cH, p.level3.cV], axis=-1).reshape(-1, 3)
    return l1, l3


def nms(mag: np.ndarray, bins: np.ndarray) -> np.ndarray:
    h, w = mag.shape
    padded = np.zeros((h + 2, w + 2))
    padded[1:-1, 1:-1] = mag
    out = np.zeros_like(mag)
    for b, (dr, dc) in enumerate(_NMS_OFFSETS):
        fwd = padded[1 + dr : 1 + dr + h, 1 + dc : 1 + dc + w]
        bwd = padded[1 - dr : 1 - dr + h, 1 - dc : 1 - dc + w]
        keep = (bins == b) & (mag > 0) & (mag >= fwd) & (mag >= bwd)
        out[keep] = mag[keep]
    return out


def hysteresis(strong: np.ndarray, weak: np.ndarray) -> np.ndarray:
    labels, count = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if count == 0:
        return np.zeros(weak.shape, dtype=bool)
    seeded = np.zeros(count + 1, dtype=bool)
    seeded[labels[strong & weak]] = True
    seeded[0] = False
    return seeded[labels]


def median_filter(img: np.ndarray, side: int) -> np.ndarray:
    r = side // 2
    padded = np.pad(img, r, mode="edge")
    windows = sliding_window_view(padded, (side, side))
    return np.median(windows, axis=(-2, -1)).astype(np.uint8)
