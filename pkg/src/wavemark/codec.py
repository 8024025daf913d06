"""Adaptive third-level Haar embedding and comparison/vote extraction.

Each 8x8 block ``i`` carries watermark bit ``i mod n``. The level-3 cA, cH and
cV coefficients of the block are shifted by ``+alpha`` (bit 1) or ``-alpha``
(bit 0), with ``alpha = beta * max(sigma_A ** gamma, alpha_min)``. Extraction
compares received level-3 coefficients against the originals kept in the
side information and takes a majority vote per bit.
"""

from __future__ import annotations

import logging
import math
import os
import struct
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .complexity import (
    CannyParams,
    block_edge_counts,
    canny,
    classify_complex,
    sigma_a_from_level1,
    strength_factor,
)
from .haar import BLOCK, BlockPyramid, SubbandSet, pyramid_inverse
from .image_io import check_image, from_real
from .metrics import psnr

log = logging.getLogger(__name__)

__all__ = [
    "Watermark",
    "EmbedParams",
    "SideInfo",
    "Vote",
    "EmbedResult",
    "CalibrationError",
    "SideInfoError",
    "COEFFICIENTS",
    "bit_for_block",
    "embed_block",
    "embed",
    "calibrate_beta",
    "extract_block_votes",
    "majority",
    "extract",
    "write_side_info",
    "read_side_info",
]

COEFFICIENTS = ("cA", "cH", "cV")
BETA_BOUNDS = (1e-3, 1e3)
PSNR_TOLERANCE = 0.1
MAX_ITERATIONS = 60


class CalibrationError(RuntimeError):
    """Target PSNR cannot be reached inside the beta search interval."""


class SideInfoError(ValueError):
    """Malformed, truncated or inconsistent side information."""


@dataclass(frozen=True)
class Watermark:
    bits: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        bits = np.asarray(self.bits).reshape(-1)
        if bits.size < 1:
            raise ValueError("watermark needs at least one bit")
        if not np.isin(bits, (0, 1)).all():
            raise ValueError("watermark bits must be 0 or 1")
        object.__setattr__(self, "bits", bits.astype(np.uint8))

    @classmethod
    def random(cls, length: int, seed: int) -> "Watermark":
        rng = np.random.default_rng(seed)
        return cls(rng.integers(0, 2, size=length, dtype=np.uint8), seed)

    def __len__(self) -> int:
        return int(self.bits.size)


@dataclass(frozen=True)
class EmbedParams:
    gamma: float = 0.4
    alpha_min: float = 0.5
    beta: float = 1.0
    # None disables calibration and uses ``beta`` as given.
    target_psnr: float | None = 45.0
    canny: CannyParams = field(default_factory=CannyParams)

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not self.alpha_min > 0:
            raise ValueError("alpha_min must be > 0")
        if not self.beta > 0:
            raise ValueError("beta must be > 0")


@dataclass
class SideInfo:
    width: int
    height: int
    gamma: float
    beta: float
    message_length: int
    is_complex: np.ndarray  # (nb,) bool
    alpha: np.ndarray  # (nb,) final per-block strength
    originals: np.ndarray  # (nb, 3) pre-embedding level-3 cA, cH, cV

    @property
    def block_count(self) -> int:
        return (self.width // BLOCK) * (self.height // BLOCK)

    def validate(self) -> None:
        nb = self.block_count
        if self.width <= 0 or self.height <= 0 or self.width % BLOCK or self.height % BLOCK:
            raise SideInfoError(f"bad dimensions {self.width}x{self.height}")
        if not 1 <= self.message_length <= nb:
            raise SideInfoError(f"message length {self.message_length} outside [1, {nb}]")
        if np.shape(self.originals) != (nb, 3) or np.shape(self.alpha) != (nb,) or np.shape(self.is_complex) != (nb,):
            raise SideInfoError("per-block records do not match the block count")
        if not (np.isfinite(self.originals).all() and np.isfinite(self.alpha).all()):
            raise SideInfoError("non-finite values in side information")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SideInfo):
            return NotImplemented
        return (
            (self.width, self.height, self.message_length) == (other.width, other.height, other.message_length)
            and _same_float(self.gamma, other.gamma)
            and _same_float(self.beta, other.beta)
            and np.array_equal(self.is_complex, other.is_complex)
            and np.array_equal(self.alpha, other.alpha)
            and np.array_equal(self.originals, other.originals)
        )


def _same_float(a: float, b: float) -> bool:
    return struct.pack("<d", a) == struct.pack("<d", b)


@dataclass(frozen=True)
class Vote:
    bit_index: int
    value: int | None  # None = abstain


class EmbedResult(NamedTuple):
    image: np.ndarray
    side_info: SideInfo


def bit_for_block(block_index: int, message_length: int) -> int:
    if message_length < 1:
        raise ValueError("message_length must be >= 1")
    return block_index % message_length


def _bit_indices(block_count: int, message_length: int) -> np.ndarray:
    return np.arange(block_count) % message_length


def embed_block(pyramid: BlockPyramid, bit: int, alpha: float) -> BlockPyramid:
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit}")
    shift = alpha if bit == 1 else -alpha
    l3 = pyramid.level3
    return pyramid.replace_level3(l3.cA + shift, l3.cH + shift, l3.cV + shift)


def _level3_footprint() -> np.ndarray:
    """Pixel-domain image of +1 on level-3 cA, cH and cV together."""
    one, zero = np.ones((1, 1)), np.zeros((1, 1))
    zeros = lambda n: SubbandSet(*(np.zeros((n, n)),) * 4)  # noqa: E731
    return pyramid_inverse(BlockPyramid(zeros(4), zeros(2), SubbandSet(one, one, one, zero)))


# The synthesis is linear, so an embedded block equals the original block plus
# (+/-alpha) times this footprint.
_FOOTPRINT = _level3_footprint()


class _Cover:
    """Per-cover analysis reused across calibration iterations."""

    def __init__(self, img: np.ndarray, backend=None):
        self.img = check_image(img)
        h, w = self.img.shape
        if h % BLOCK or w % BLOCK:
            raise ValueError(f"dimensions must be multiples of 8, got {w}x{h}")
        self.real = self.img.astype(np.float64)
        level1, self.level3 = (backend or kernels.backend).block_analysis(self.real)
        self.sigma = sigma_a_from_level1(level1)
        self.block_grid = (h // BLOCK, w // BLOCK)

    @property
    def block_count(self) -> int:
        return self.sigma.size

    def unit_delta(self, wm: Watermark, gamma: float, alpha_min: float) -> tuple[np.ndarray, np.ndarray]:
        """Signed pixel change for beta = 1, and the unscaled per-block alpha."""
        nb = self.block_count
        if len(wm) > nb:
            raise ValueError(f"message of {len(wm)} bits exceeds the {nb} available blocks")
        alpha = np.atleast_1d(strength_factor(self.sigma, gamma, alpha_min))
        signs = np.where(wm.bits[_bit_indices(nb, len(wm))] == 1, 1.0, -1.0)
        per_block = (signs * alpha).reshape(self.block_grid)
        delta = per_block[:, None, :, None] * _FOOTPRINT[None, :, None, :]
        return delta.reshape(self.img.shape), alpha

    def render(self, unit_delta: np.ndarray, beta: float) -> np.ndarray:
        return from_real(self.real + beta * unit_delta)


def _search_beta(cover: _Cover, unit_delta: np.ndarray, target_psnr: float) -> float:
    if not (math.isfinite(target_psnr) and target_psnr > 25.0):
        raise CalibrationError(f"target PSNR {target_psnr} dB is not attainable (need finite, > 25 dB)")
    lo, hi = BETA_BOUNDS
    for it in range(MAX_ITERATIONS):
        beta = math.sqrt(lo * hi)
        achieved = psnr(cover.img, cover.render(unit_delta, beta))
        if abs(achieved - target_psnr) <= PSNR_TOLERANCE:
            log.debug("beta %.6g reaches %.3f dB after %d steps", beta, achieved, it + 1)
            return beta
        if achieved > target_psnr:
            lo = beta
        else:
            hi = beta
    raise CalibrationError(
        f"target PSNR {target_psnr} dB unattainable for beta in {BETA_BOUNDS} "
        f"(last beta {beta:.6g} gave {achieved:.3f} dB)"
    )


def calibrate_beta(
    img: np.ndarray,
    wm: Watermark,
    gamma: float = 0.4,
    alpha_min: float = 0.5,
    target_psnr: float = 45.0,
) -> float:
    """Bisect beta (geometrically) until the watermarked PSNR is within 0.1 dB of the target."""
    cover = _Cover(img)
    delta, _ = cover.unit_delta(wm, gamma, alpha_min)
    return _search_beta(cover, delta, target_psnr)


def embed(img: np.ndarray, wm: Watermark, params: EmbedParams = EmbedParams()) -> EmbedResult:
    cover = _Cover(img)
    delta, alpha = cover.unit_delta(wm, params.gamma, params.alpha_min)
    if params.target_psnr is None:
        beta = float(params.beta)
    else:
        beta = _search_beta(cover, delta, params.target_psnr)
    flags = classify_complex(block_edge_counts(canny(cover.img, params.canny)))
    side = SideInfo(
        width=cover.img.shape[1],
        height=cover.img.shape[0],
        gamma=float(params.gamma),
        beta=beta,
        message_length=len(wm),
        is_complex=flags,
        alpha=beta * alpha,
        originals=cover.level3.copy(),
    )
    return EmbedResult(cover.render(delta, beta), side)


def extract_block_votes(pyramid: BlockPyramid, originals: Sequence[float], bit_index: int = 0) -> tuple[Vote, Vote, Vote]:
    received = (pyramid.level3.cA, pyramid.level3.cH, pyramid.level3.cV)
    votes = []
    for now, before in zip(received, originals):
        now = float(np.asarray(now).reshape(-1)[0])
        value = 1 if now > before else 0 if now < before else None
        votes.append(Vote(bit_index, value))
    return tuple(votes)


def majority(values: Sequence[int | None]) -> int:
    """1 iff strictly more 1-votes than 0-votes; ties and all-abstain give 0."""
    ones = sum(1 for v in values if v == 1)
    zeros = sum(1 for v in values if v == 0)
    return 1 if ones > zeros else 0


def extract(
    img: np.ndarray,
    side: SideInfo,
    coefficients: Sequence[str] = COEFFICIENTS,
    backend=None,
) -> np.ndarray:
    """Recover the message bits; ``coefficients`` selects which level-3 votes count."""
    img = check_image(img)
    side.validate()
    if img.shape != (side.height, side.width):
        raise ValueError(
            f"image is {img.shape[1]}x{img.shape[0]} but side information describes "
            f"{side.width}x{side.height}"
        )
    cols = [COEFFICIENTS.index(c) for c in coefficients]
    if not cols:
        raise ValueError("need at least one coefficient to vote with")
    _, received = (backend or kernels.backend).block_analysis(img.astype(np.float64))
    diff = received[:, cols] - side.originals[:, cols]
    bit_idx = _bit_indices(side.block_count, side.message_length)
    n = side.message_length
    ones = np.bincount(bit_idx, weights=(diff > 0).sum(axis=1), minlength=n)
    zeros = np.bincount(bit_idx, weights=(diff < 0).sum(axis=1), minlength=n)
    return (ones > zeros).astype(np.uint8)


# --- side information file -------------------------------------------------

_MAGIC = b"WMSI"
_VERSION = 1
_HEADER = struct.Struct("<4sIIIIdd")
_RECORD = np.dtype(
    [("is_complex", "u1"), ("alpha", "<f8"), ("ca", "<f8"), ("ch", "<f8"), ("cv", "<f8")]
)


def write_side_info(side: SideInfo, path: str | os.PathLike) -> None:
    side.validate()
    records = np.empty(side.block_count, dtype=_RECORD)
    records["is_complex"] = np.asarray(side.is_complex, dtype=bool)
    records["alpha"] = side.alpha
    records["ca"], records["ch"], records["cv"] = np.asarray(side.originals, dtype=np.float64).T
    with open(path, "wb") as fh:
        fh.write(
            _HEADER.pack(_MAGIC, _VERSION, side.width, side.height, side.message_length, side.gamma, side.beta)
        )
        fh.write(records.tobytes())


def read_side_info(path: str | os.PathLike) -> SideInfo:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 4 or data[:4] != _MAGIC:
        raise SideInfoError(f"bad magic {data[:4]!r}, expected {_MAGIC!r}")
    if len(data) < _HEADER.size:
        raise SideInfoError("truncated header")
    _, version, width, height, length, gamma, beta = _HEADER.unpack_from(data)
    if version != _VERSION:
        raise SideInfoError(f"unsupported side-info version {version}")
    if width == 0 or height == 0 or width % BLOCK or height % BLOCK:
        raise SideInfoError(f"bad dimensions {width}x{height} in header")
    nb = (width // BLOCK) * (height // BLOCK)
    payload = data[_HEADER.size :]
    expected = nb * _RECORD.itemsize
    if len(payload) < expected:
        raise SideInfoError(
            f"truncated: header implies {nb} blocks, payload holds {len(payload) / _RECORD.itemsize:.2f} records"
        )
    if len(payload) > expected:
        raise SideInfoError(
            f"block-count mismatch: header implies {nb} blocks, payload holds "
            f"{len(payload) / _RECORD.itemsize:.2f} records"
        )
    records = np.frombuffer(payload, dtype=_RECORD)
    if records["is_complex"].max(initial=0) > 1:
        raise SideInfoError("is_complex flag must be 0 or 1")
    side = SideInfo(
        width=width,
        height=height,
        gamma=gamma,
        beta=beta,
        message_length=length,
        is_complex=records["is_complex"].astype(bool),
        alpha=records["alpha"].copy(),
        originals=np.stack([records["ca"], records["ch"], records["cv"]], axis=1),
    )
    side.validate()
    return side
