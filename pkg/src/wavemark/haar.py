"""Orthonormal 2-D Haar transform on 8x8 blocks, three levels deep.

For each 2x2 cell ``[[p00, p01], [p10, p11]]`` one analysis level produces::

    cA = (p00 + p01 + p10 + p11) / 2
    cH = (p00 + p01 - p10 - p11) / 2    # top minus bottom
    cV = (p00 - p01 + p10 - p11) / 2    # left minus right
    cD = (p00 - p01 - p10 + p11) / 2

All functions accept arrays with arbitrary leading batch axes; the
transform acts on the trailing two axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "BLOCK",
    "LEVELS",
    "SubbandSet",
    "BlockPyramid",
    "dwt2_level",
    "idwt2_level",
    "pyramid_forward",
    "pyramid_inverse",
    "block_view",
    "unblock",
]

BLOCK = 8
LEVELS = 3


@dataclass(frozen=True)
class SubbandSet:
    cA: np.ndarray
    cH: np.ndarray
    cV: np.ndarray
    cD: np.ndarray

    def __post_init__(self):
        shapes = {np.shape(self.cA), np.shape(self.cH), np.shape(self.cV), np.shape(self.cD)}
        if len(shapes) != 1:
            raise ValueError(f"subband shapes differ: {sorted(shapes)}")

    def energy(self) -> np.ndarray:
        """Sum of squares over the trailing two axes of all four subbands."""
        return sum(np.sum(np.square(b), axis=(-2, -1)) for b in (self.cA, self.cH, self.cV, self.cD))


@dataclass(frozen=True)
class BlockPyramid:
    """Three analysis levels of an 8x8 block; ``level3`` subbands are 1x1."""

    level1: SubbandSet
    level2: SubbandSet
    level3: SubbandSet

    @property
    def levels(self) -> tuple[SubbandSet, SubbandSet, SubbandSet]:
        return (self.level1, self.level2, self.level3)

    def replace_level3(self, cA=None, cH=None, cV=None) -> "BlockPyramid":
        l3 = self.level3
        return BlockPyramid(
            self.level1,
            self.level2,
            SubbandSet(
                l3.cA if cA is None else np.asarray(cA, dtype=np.float64).reshape(l3.cA.shape),
                l3.cH if cH is None else np.asarray(cH, dtype=np.float64).reshape(l3.cH.shape),
                l3.cV if cV is None else np.asarray(cV, dtype=np.float64).reshape(l3.cV.shape),
                l3.cD,
            ),
        )


def dwt2_level(x: np.ndarray) -> SubbandSet:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim < 2 or x.shape[-1] != x.shape[-2]:
        raise ValueError(f"expected square trailing axes, got shape {x.shape}")
    if x.shape[-1] == 0 or x.shape[-1] % 2:
        raise ValueError(f"side length must be even and positive, got {x.shape[-1]}")
    p00 = x[..., 0::2, 0::2]
    p01 = x[..., 0::2, 1::2]
    p10 = x[..., 1::2, 0::2]
    p11 = x[..., 1::2, 1::2]
    # Evaluation order is mirrored exactly in _ckernels.pyx.
    return SubbandSet(
        cA=(((p00 + p01) + p10) + p11) / 2.0,
        cH=(((p00 + p01) - p10) - p11) / 2.0,
        cV=(((p00 - p01) + p10) - p11) / 2.0,
        cD=(((p00 - p01) - p10) + p11) / 2.0,
    )


def idwt2_level(s: SubbandSet) -> np.ndarray:
    cA, cH, cV, cD = (np.asarray(b, dtype=np.float64) for b in (s.cA, s.cH, s.cV, s.cD))
    if not (cA.shape == cH.shape == cV.shape == cD.shape):
        raise ValueError("mismatched subband dimensions")
    if cA.ndim < 2:
        raise ValueError("subbands must be at least 2-D")
    out = np.empty(cA.shape[:-2] + (2 * cA.shape[-2], 2 * cA.shape[-1]))
    out[..., 0::2, 0::2] = (((cA + cH) + cV) + cD) / 2.0
    out[..., 0::2, 1::2] = (((cA + cH) - cV) - cD) / 2.0
    out[..., 1::2, 0::2] = (((cA - cH) + cV) - cD) / 2.0
    out[..., 1::2, 1::2] = (((cA - cH) - cV) + cD) / 2.0
    return out


def pyramid_forward(block: np.ndarray) -> BlockPyramid:
    block = np.asarray(block, dtype=np.float64)
    if block.shape[-2:] != (BLOCK, BLOCK):
        raise ValueError(f"expected 8x8 block(s), got shape {block.shape}")
    l1 = dwt2_level(block)
    l2 = dwt2_level(l1.cA)
    l3 = dwt2_level(l2.cA)
    return BlockPyramid(l1, l2, l3)


def pyramid_inverse(p: BlockPyramid) -> np.ndarray:
    expected = ((4, 4), (2, 2), (1, 1))
    for level, side in zip(p.levels, expected):
        if np.shape(level.cA)[-2:] != side:
            raise ValueError(f"malformed pyramid: subband {np.shape(level.cA)} where {side} expected")
    ca2 = idwt2_level(p.level3)
    ca1 = idwt2_level(SubbandSet(ca2, p.level2.cH, p.level2.cV, p.level2.cD))
    return idwt2_level(SubbandSet(ca1, p.level1.cH, p.level1.cV, p.level1.cD))


def block_view(img: np.ndarray) -> np.ndarray:
    """Reshape an ``(H, W)`` image into ``(H/8, W/8, 8, 8)`` blocks (a copy-free view when possible)."""
    h, w = img.shape
    if h % BLOCK or w % BLOCK:
        raise ValueError(f"dimensions must be multiples of 8, got {w}x{h}")
    return img.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK).swapaxes(1, 2)


def unblock(blocks: np.ndarray) -> np.ndarray:
    hb, wb = blocks.shape[:2]
    return blocks.swapaxes(1, 2).reshape(hb * BLOCK, wb * BLOCK)
