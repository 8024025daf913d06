"""Seedable attack suite: median/Gaussian filtering, salt & pepper, AWGN, JPEG.

Every attack maps an 8-bit image to an 8-bit image of the same shape. Noise
attacks draw from ``numpy.random.default_rng(seed)`` in row-major order, so
outputs depend only on (image, parameter, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from scipy.fft import dctn, idctn

from . import kernels
from .complexity import gaussian_kernel1d
from .haar import block_view, unblock
from .image_io import check_image, from_real, round_half_away

__all__ = [
    "AttackSpec",
    "parse_attack",
    "apply_attack",
    "median_filter",
    "gaussian_filter",
    "salt_pepper",
    "awgn",
    "awgn_noise",
    "jpeg_sim",
    "quant_table",
    "LUMINANCE_TABLE",
    "TABLE1_ATTACKS",
    "TABLE2_ATTACKS",
]

# ITU-T T.81 Annex K.1 luminance table
LUMINANCE_TABLE = np.array(
    [
        [16, 11, 10, 16, 24, 40, 51, 61],
        [12, 12, 14, 19, 26, 58, 60, 55],
        [14, 13, 16, 24, 40, 57, 69, 56],
        [14, 17, 22, 29, 51, 87, 80, 62],
        [18, 22, 37, 56, 68, 109, 103, 77],
        [24, 35, 55, 64, 81, 104, 113, 92],
        [49, 64, 78, 87, 103, 121, 120, 101],
        [72, 92, 95, 98, 112, 100, 103, 99],
    ],
    dtype=np.int64,
)

KINDS = ("median", "gaussian_filter", "salt_pepper", "awgn", "jpeg")

TABLE1_ATTACKS = ("median3", "awgn:15", "sp:0.03", "sp:0.04", "sp:0.05", "gauss:1.5")
TABLE2_ATTACKS = ("median3", "median5", "jpeg:20", "jpeg:30", "jpeg:40")


@dataclass(frozen=True)
class AttackSpec:
    kind: str
    parameter: float
    seed: int = 0

    def __post_init__(self):
        k, p = self.kind, self.parameter
        if k not in KINDS:
            raise ValueError(f"unknown attack kind {k!r}")
        if k == "median" and p not in (3, 5):
            raise ValueError(f"median side must be 3 or 5, got {p}")
        if k == "salt_pepper" and not 0 < p < 1:
            raise ValueError(f"salt & pepper density must lie in (0, 1), got {p}")
        if k in ("gaussian_filter", "awgn") and not p > 0:
            raise ValueError(f"variance must be > 0, got {p}")
        if k == "jpeg" and not (float(p).is_integer() and 1 <= p <= 100):
            raise ValueError(f"JPEG quality must be an integer in [1, 100], got {p}")

    @property
    def is_noise(self) -> bool:
        return self.kind in ("salt_pepper", "awgn")

    @property
    def label(self) -> str:
        """Canonical CLI string, e.g. ``sp:0.03``."""
        p = self.parameter
        num = f"{int(p)}" if float(p).is_integer() else f"{p:g}"
        return {
            "median": f"median{num}",
            "gaussian_filter": f"gauss:{num}",
            "salt_pepper": f"sp:{num}",
            "awgn": f"awgn:{num}",
            "jpeg": f"jpeg:{num}",
        }[self.kind]


_PREFIXES = {"gauss": "gaussian_filter", "sp": "salt_pepper", "awgn": "awgn", "jpeg": "jpeg"}


def parse_attack(text: str, seed: int = 0) -> AttackSpec:
    """Parse ``median3``, ``median5``, ``gauss:1.5``, ``sp:0.03``, ``awgn:15``, ``jpeg:20``."""
    text = text.strip().lower()
    if text.startswith("median"):
        rest = text[len("median") :].lstrip(":")
        if not rest.isdigit():
            raise ValueError(f"malformed median attack {text!r}")
        return AttackSpec("median", int(rest), seed)
    name, sep, value = text.partition(":")
    if not sep or name not in _PREFIXES:
        raise ValueError(f"unknown attack {text!r}")
    try:
        param = float(value)
    except ValueError:
        raise ValueError(f"malformed parameter in attack {text!r}") from None
    if not math.isfinite(param):
        raise ValueError(f"malformed parameter in attack {text!r}")
    return AttackSpec(_PREFIXES[name], param, seed)


def apply_attack(img: np.ndarray, spec: AttackSpec | str, seed: int | None = None) -> np.ndarray:
    if isinstance(spec, str):
        spec = parse_attack(spec, 0 if seed is None else seed)
    s = spec.seed if seed is None else seed
    p = spec.parameter
    if spec.kind == "median":
        return median_filter(img, int(p))
    if spec.kind == "gaussian_filter":
        return gaussian_filter(img, p)
    if spec.kind == "salt_pepper":
        return salt_pepper(img, p, s)
    if spec.kind == "awgn":
        return awgn(img, p, s)
    return jpeg_sim(img, int(p))


def median_filter(img: np.ndarray, side: int = 3, backend=None) -> np.ndarray:
    """side x side median with replicate padding."""
    img = check_image(img)
    if side <= 0 or side % 2 == 0:
        raise ValueError(f"median side must be odd and positive, got {side}")
    return (backend or kernels.backend).median_filter(img, side)


def gaussian_filter(img: np.ndarray, variance: float) -> np.ndarray:
    img = check_image(img)
    if not variance > 0:
        raise ValueError(f"variance must be > 0, got {variance}")
    g = gaussian_kernel1d(math.sqrt(variance))
    out = ndimage.correlate1d(img.astype(np.float64), g, axis=0, mode="nearest")
    out = ndimage.correlate1d(out, g, axis=1, mode="nearest")
    return from_real(out)


def salt_pepper(img: np.ndarray, density: float, seed: int) -> np.ndarray:
    """Replace exactly round(density*N) distinct pixels; the first half (rounded up) become 255."""
    img = check_image(img)
    if not 0 < density < 1:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    n = img.size
    count = int(math.floor(density * n + 0.5))
    rng = np.random.default_rng(seed)
    positions = rng.choice(n, size=count, replace=False)
    n_salt = (count + 1) // 2
    out = img.copy().reshape(-1)
    out[positions[:n_salt]] = 255
    out[positions[n_salt:]] = 0
    return out.reshape(img.shape)


def awgn_noise(shape: tuple[int, int], variance: float, seed: int) -> np.ndarray:
    if not variance > 0:
        raise ValueError(f"variance must be > 0, got {variance}")
    return np.random.default_rng(seed).normal(0.0, math.sqrt(variance), size=shape)


def awgn(img: np.ndarray, variance: float, seed: int) -> np.ndarray:
    img = check_image(img)
    return from_real(img.astype(np.float64) + awgn_noise(img.shape, variance, seed))


def quant_table(quality: int) -> np.ndarray:
    """Luminance table scaled by the libjpeg quality rule (integer arithmetic)."""
    if not (int(quality) == quality and 1 <= quality <= 100):
        raise ValueError(f"JPEG quality must be an integer in [1, 100], got {quality}")
    q = int(quality)
    scale = 5000 // q if q < 50 else 200 - 2 * q
    return np.clip((LUMINANCE_TABLE * scale + 50) // 100, 1, 255)


def jpeg_sim(img: np.ndarray, quality: int) -> np.ndarray:
    """Blockwise DCT quantization round trip; entropy coding is skipped."""
    img = check_image(img)
    table = quant_table(quality).astype(np.float64)
    blocks = block_view(img.astype(np.float64) - 128.0)
    coeffs = dctn(blocks, type=2, axes=(-2, -1), norm="ortho")
    coeffs = round_half_away(coeffs / table) * table
    recon = idctn(coeffs, type=2, axes=(-2, -1), norm="ortho")
    return from_real(unblock(recon) + 128.0)
