import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import ndimage

from wavemark.complexity import (
    CannyParams,
    block_complexity,
    block_edge_counts,
    canny,
    classify_complex,
    gaussian_kernel1d,
    sigma_a,
    strength_factor,
)
from wavemark.haar import dwt2_level

from conftest import natural_like


class TestCanny:
    def test_constant_image_has_no_edges(self, backend):
        assert not canny(np.full((64, 64), 77, np.uint8), backend=backend).any()

    def test_vertical_step_localized(self, backend):
        img = np.zeros((64, 64), np.uint8)
        img[:, 32:] = 255
        edges = canny(img, backend=backend)
        cols = np.nonzero(edges)[1]
        assert cols.size > 0
        # boundary lies between columns 31 and 32
        assert cols.min() >= 30 and cols.max() <= 33

    def test_single_bright_pixel(self, backend):
        img = np.zeros((64, 64), np.uint8)
        img[30, 40] = 255
        rows, cols = np.nonzero(canny(img, backend=backend))
        assert rows.size > 0
        assert np.max(np.maximum(np.abs(rows - 30), np.abs(cols - 40))) <= 5

    def test_backends_agree_on_natural_image(self):
        from wavemark import kernels

        img = natural_like((96, 96), seed=3)
        maps = [canny(img, backend=b) for b in kernels.available_backends().values()]
        for m in maps[1:]:
            np.testing.assert_array_equal(m, maps[0])

    def test_edges_have_nonzero_gradient(self):
        p = CannyParams()
        for seed in range(5):
            img = natural_like((64, 64), seed=seed)
            edges = canny(img, p)
            r = math.ceil(3 * p.gaussian_sigma)
            smooth = ndimage.gaussian_filter(img.astype(float), p.gaussian_sigma, mode="nearest", truncate=r / p.gaussian_sigma)
            mag = np.hypot(ndimage.sobel(smooth, 1, mode="nearest"), ndimage.sobel(smooth, 0, mode="nearest"))
            assert edges.any()
            assert np.all(mag[edges] > 0)

    def test_too_small(self):
        with pytest.raises(ValueError, match="smaller than"):
            canny(np.zeros((8, 8), np.uint8))

    def test_params(self):
        assert CannyParams().kernel_side == 11
        with pytest.raises(ValueError):
            CannyParams(high_fraction=0.1, low_fraction=0.2)
        with pytest.raises(ValueError):
            CannyParams(gaussian_sigma=0)

    def test_gaussian_kernel_normalized(self):
        k = gaussian_kernel1d(1.4)
        assert k.size == 11 and k.sum() == pytest.approx(1.0)


class TestBlockCounts:
    def test_empty(self):
        assert block_edge_counts(np.zeros((16, 16), bool)).tolist() == [0, 0, 0, 0]

    def test_single_pixel_index(self):
        e = np.zeros((16, 16), bool)
        e[9, 3] = True
        assert block_edge_counts(e).tolist() == [0, 0, 1, 0]

    def test_full(self):
        assert block_edge_counts(np.ones((16, 16), bool)).tolist() == [64] * 4

    def test_sum_preserved(self, rng):
        e = rng.random((32, 48)) < 0.3
        assert block_edge_counts(e).sum() == e.sum()

    def test_bad_dims(self):
        with pytest.raises(ValueError):
            block_edge_counts(np.zeros((12, 16), bool))


class TestClassify:
    def test_examples(self):
        assert classify_complex([0, 0, 10, 10]).tolist() == [False, False, True, True]
        assert classify_complex([7, 7, 7]).tolist() == [False, False, False]
        assert classify_complex([64, 0, 0, 0]).tolist() == [True, False, False, False]

    def test_empty(self):
        with pytest.raises(ValueError):
            classify_complex([])

    @given(st.lists(st.integers(0, 64), min_size=1, max_size=50))
    def test_strictly_above_mean(self, counts):
        mean = sum(counts) / len(counts)
        assert classify_complex(counts).tolist() == [c > mean for c in counts]


class TestSigma:
    def test_constant(self):
        assert sigma_a(np.full((8, 8), 42.0)) == 0.0

    def test_checkerboard(self):
        board = (np.indices((8, 8)).sum(axis=0) % 2) * 2.0
        assert sigma_a(board) == 0.0

    def test_direct_formula(self):
        block = np.arange(64, dtype=float).reshape(8, 8) ** 1.3
        ca = dwt2_level(block).cA.ravel()
        mean = sum(ca) / 16
        expected = math.sqrt(sum((c - mean) ** 2 for c in ca) / 16)
        assert sigma_a(block) == pytest.approx(expected, rel=1e-12)

    @settings(max_examples=50)
    @given(arrays(np.float64, (8, 8), elements=st.floats(0, 255)), st.floats(-100, 100))
    def test_translation_invariant(self, block, shift):
        assert sigma_a(block + shift) == pytest.approx(sigma_a(block), abs=1e-9)


class TestStrength:
    def test_examples(self):
        assert strength_factor(32.0, 0.4, 0.5) == pytest.approx(4.0, rel=1e-12)
        for g in (0.0, 0.3, 1.0):
            assert strength_factor(1.0, g, 0.5) == 1.0
        assert strength_factor(0.0, 0.4, 0.5) == 0.5

    @pytest.mark.parametrize("gamma", [-0.1, 1.2])
    def test_gamma_range(self, gamma):
        with pytest.raises(ValueError):
            strength_factor(4.0, gamma, 0.5)

    @given(st.floats(0, 1e4), st.floats(0, 1e4), st.floats(0, 1))
    def test_monotone_in_sigma(self, a, b, gamma):
        lo, hi = sorted((a, b))
        assert strength_factor(lo, gamma, 0.5) <= strength_factor(hi, gamma, 0.5)

    def test_vectorized(self):
        out = strength_factor(np.array([0.0, 1.0, 32.0]), 0.4, 0.5)
        np.testing.assert_allclose(out, [0.5, 1.0, 4.0])


def test_block_complexity_records():
    img = natural_like((64, 64), seed=1)
    recs = block_complexity(img)
    assert len(recs) == 64
    counts = [r.edge_count for r in recs]
    mean = sum(counts) / len(counts)
    for i, r in enumerate(recs):
        assert r.block_index == i
        assert 0 <= r.edge_count <= 64
        assert r.is_complex == (r.edge_count > mean)
        assert r.alpha >= 0.5
        block = img[(i // 8) * 8 : (i // 8) * 8 + 8, (i % 8) * 8 : (i % 8) * 8 + 8].astype(float)
        assert r.sigma_A == pytest.approx(sigma_a(block), abs=1e-12)


@pytest.mark.parametrize("level", [0, 37, 128, 255])
def test_flat_image_has_no_edges_at_any_level(level, backend):
    # smoothing round-off must not be promoted to edges by the relative thresholds
    assert not canny(np.full((40, 56), level, np.uint8), backend=backend).any()
