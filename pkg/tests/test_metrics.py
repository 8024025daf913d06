import math

import numpy as np
import pytest

from wavemark.metrics import ber, mse, psnr, quality_report


def psnr_oracle(a, b):
    total = 0
    for x, y in zip(a.ravel().tolist(), b.ravel().tolist()):
        total += (x - y) ** 2
    if total == 0:
        return math.inf
    return 10 * math.log10(255 ** 2 / (total / a.size))


def test_identical_is_infinite():
    a = np.full((8, 8), 9, np.uint8)
    assert psnr(a, a) == math.inf


def test_off_by_one():
    a = np.full((16, 16), 100, np.uint8)
    assert psnr(a, a + 1) == pytest.approx(48.1308, abs=1e-3)
    assert psnr(a, a + 1) == pytest.approx(20 * math.log10(255), abs=1e-12)


def test_off_by_255():
    assert psnr(np.zeros((4, 4), np.uint8), np.full((4, 4), 255, np.uint8)) == 0.0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        psnr(np.zeros((4, 4), np.uint8), np.zeros((4, 5), np.uint8))


def test_psnr_symmetric_and_matches_oracle(rng):
    for _ in range(30):
        shape = tuple(rng.integers(1, 20, 2))
        a = rng.integers(0, 256, shape).astype(np.uint8)
        b = rng.integers(0, 256, shape).astype(np.uint8)
        assert psnr(a, b) == psnr(b, a)
        assert psnr(a, b) == pytest.approx(psnr_oracle(a, b), rel=1e-12)


def test_ber_examples():
    x = np.zeros(128, np.uint8)
    assert ber(x, x) == 0.0
    y = np.zeros(256, np.uint8)
    z = y.copy()
    z[[3, 200]] = 1
    assert ber(y, z) == 0.78125
    assert round(ber(y, z), 2) == 0.78
    assert ber(x, 1 - x) == 100.0


def test_ber_errors():
    with pytest.raises(ValueError):
        ber([0, 1], [0, 1, 1])
    with pytest.raises(ValueError):
        ber([0, 2], [0, 1])


def test_ber_symmetric(rng):
    a = rng.integers(0, 2, 100)
    b = rng.integers(0, 2, 100)
    assert ber(a, b) == ber(b, a)
    assert ber(a, a) == 0.0


def test_quality_report():
    a = np.full((4, 4), 10, np.uint8)
    rep = quality_report(a, a + 1, [0, 1, 1, 0], [0, 1, 0, 0])
    assert rep.mse == 1.0
    assert rep.bits_total == 4 and rep.bits_wrong == 1
    assert rep.ber_percent == 25.0
    assert rep.psnr == pytest.approx(10 * math.log10(255 ** 2 / rep.mse))
    assert mse(a, a) == 0.0
