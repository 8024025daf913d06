import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wavemark.haar import (
    BlockPyramid,
    SubbandSet,
    block_view,
    dwt2_level,
    idwt2_level,
    pyramid_forward,
    pyramid_inverse,
    unblock,
)

blocks8 = arrays(np.float64, (8, 8), elements=st.floats(-1000, 1000, allow_subnormal=False))


def level3_oracle(b):
    """Closed-form level-3 coefficients of an orthonormal 3-level Haar block."""
    tl, tr, bl, br = b[:4, :4].sum(), b[:4, 4:].sum(), b[4:, :4].sum(), b[4:, 4:].sum()
    return (
        (tl + tr + bl + br) / 8,
        (tl + tr - bl - br) / 8,
        (tl - tr + bl - br) / 8,
        (tl - tr - bl + br) / 8,
    )


class TestLevel:
    def test_constant(self):
        s = dwt2_level([[1.0, 1.0], [1.0, 1.0]])
        assert (s.cA, s.cH, s.cV, s.cD) == ([[2.0]], [[0.0]], [[0.0]], [[0.0]])

    def test_direct_formula(self):
        s = dwt2_level([[4.0, 2.0], [2.0, 0.0]])
        assert s.cA[0, 0] == 4 and s.cH[0, 0] == 2 and s.cV[0, 0] == 2 and s.cD[0, 0] == 0

    def test_constant_8x8(self):
        s = dwt2_level(np.full((8, 8), 3.0))
        np.testing.assert_array_equal(s.cA, np.full((4, 4), 6.0))
        for band in (s.cH, s.cV, s.cD):
            np.testing.assert_array_equal(band, 0.0)

    def test_odd_side_rejected(self):
        with pytest.raises(ValueError):
            dwt2_level(np.zeros((3, 3)))

    def test_inverse_examples(self):
        z = np.zeros((1, 1))
        np.testing.assert_array_equal(idwt2_level(SubbandSet(np.full((1, 1), 2.0), z, z, z)), [[1, 1], [1, 1]])
        np.testing.assert_array_equal(idwt2_level(SubbandSet(z, z, z, np.full((1, 1), 2.0))), [[1, -1], [-1, 1]])

    def test_mismatched_subbands(self):
        with pytest.raises(ValueError):
            SubbandSet(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((1, 1)))

    def test_round_trip_random(self, rng):
        x = rng.normal(size=(16, 16)) * 50
        np.testing.assert_allclose(idwt2_level(dwt2_level(x)), x, atol=1e-12)

    def test_level1_matches_loop_oracle(self, rng):
        x = rng.uniform(0, 255, (8, 8))
        s = dwt2_level(x)
        for i in range(4):
            for j in range(4):
                a, b, c, d = x[2 * i, 2 * j], x[2 * i, 2 * j + 1], x[2 * i + 1, 2 * j], x[2 * i + 1, 2 * j + 1]
                assert s.cA[i, j] == pytest.approx((a + b + c + d) / 2)
                assert s.cH[i, j] == pytest.approx((a + b - c - d) / 2)
                assert s.cV[i, j] == pytest.approx((a - b + c - d) / 2)
                assert s.cD[i, j] == pytest.approx((a - b - c + d) / 2)


class TestPyramid:
    def test_constant_block(self):
        p = pyramid_forward(np.ones((8, 8)))
        assert p.level3.cA[0, 0] == 8.0
        for lvl in p.levels:
            for band in (lvl.cH, lvl.cV, lvl.cD):
                np.testing.assert_array_equal(band, 0.0)
        assert p.level1.cA.shape == (4, 4) and p.level2.cA.shape == (2, 2) and p.level3.cA.shape == (1, 1)

    def test_inverse_of_constant(self):
        z = lambda n: SubbandSet(*(np.zeros((n, n)),) * 4)  # noqa: E731
        p = BlockPyramid(z(4), z(2), SubbandSet(np.full((1, 1), 8.0), *(np.zeros((1, 1)),) * 3))
        np.testing.assert_array_equal(pyramid_inverse(p), np.ones((8, 8)))

    def test_level3_matches_closed_form(self, rng):
        b = rng.uniform(-100, 300, (8, 8))
        p = pyramid_forward(b)
        got = (p.level3.cA[0, 0], p.level3.cH[0, 0], p.level3.cV[0, 0], p.level3.cD[0, 0])
        np.testing.assert_allclose(got, level3_oracle(b), rtol=0, atol=1e-10)

    def test_wrong_size(self):
        with pytest.raises(ValueError):
            pyramid_forward(np.zeros((4, 4)))

    def test_malformed_pyramid(self):
        p = pyramid_forward(np.zeros((8, 8)))
        bad = BlockPyramid(p.level1, p.level1, p.level3)
        with pytest.raises(ValueError):
            pyramid_inverse(bad)

    @pytest.mark.parametrize("alpha", [1.0, -2.5, 7.25])
    def test_ca_perturbation_footprint(self, rng, alpha):
        b = rng.uniform(0, 255, (8, 8))
        p = pyramid_forward(b)
        moved = pyramid_inverse(p.replace_level3(cA=p.level3.cA + alpha))
        np.testing.assert_allclose(moved - b, alpha / 8, atol=1e-12)

    @pytest.mark.parametrize("alpha", [1.0, 4.0])
    def test_ch_perturbation_footprint(self, rng, alpha):
        b = rng.uniform(0, 255, (8, 8))
        p = pyramid_forward(b)
        diff = pyramid_inverse(p.replace_level3(cH=p.level3.cH + alpha)) - b
        np.testing.assert_allclose(diff[:4], alpha / 8, atol=1e-12)
        np.testing.assert_allclose(diff[4:], -alpha / 8, atol=1e-12)

    def test_cv_perturbation_footprint(self, rng):
        b = rng.uniform(0, 255, (8, 8))
        p = pyramid_forward(b)
        diff = pyramid_inverse(p.replace_level3(cV=p.level3.cV + 8.0)) - b
        np.testing.assert_allclose(diff[:, :4], 1.0, atol=1e-12)
        np.testing.assert_allclose(diff[:, 4:], -1.0, atol=1e-12)

    def test_energy_over_pyramid(self, rng):
        b = rng.normal(size=(8, 8)) * 40
        p = pyramid_forward(b)
        total = sum(np.sum(np.square(getattr(lvl, k))) for lvl in p.levels for k in ("cH", "cV", "cD"))
        total += np.sum(np.square(p.level3.cA))
        assert total == pytest.approx(np.sum(b * b), rel=1e-12)

    def test_batched_equals_single(self, rng):
        bs = rng.uniform(0, 255, (5, 8, 8))
        batch = pyramid_forward(bs)
        for i in range(5):
            one = pyramid_forward(bs[i])
            np.testing.assert_array_equal(batch.level1.cA[i], one.level1.cA)
            np.testing.assert_array_equal(batch.level3.cV[i], one.level3.cV)


@settings(max_examples=200, deadline=None)
@given(blocks8)
def test_perfect_reconstruction_property(b):
    assert np.max(np.abs(pyramid_inverse(pyramid_forward(b)) - b)) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(blocks8)
def test_energy_every_level(b):
    x = b
    for _ in range(3):
        s = dwt2_level(x)
        e_in = np.sum(x * x)
        assert abs(s.energy() - e_in) <= 1e-9 * max(e_in, 1.0)
        x = s.cA


@settings(max_examples=100, deadline=None)
@given(blocks8, blocks8, st.floats(-5, 5), st.floats(-5, 5))
def test_linearity(x, y, a, c):
    lhs = pyramid_forward(a * x + c * y)
    px, py = pyramid_forward(x), pyramid_forward(y)
    for l, lx, ly in zip(lhs.levels, px.levels, py.levels):
        for k in ("cA", "cH", "cV", "cD"):
            np.testing.assert_allclose(getattr(l, k), a * getattr(lx, k) + c * getattr(ly, k), atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(blocks8, st.floats(-50, 50))
def test_ca_shift_moves_mean(b, alpha):
    p = pyramid_forward(b)
    out = pyramid_inverse(p.replace_level3(cA=p.level3.cA + alpha))
    assert abs((out.mean() - b.mean()) - alpha / 8) <= 1e-9


def test_block_view_round_trip(rng):
    img = rng.integers(0, 256, (16, 24))
    v = block_view(img)
    assert v.shape == (2, 3, 8, 8)
    np.testing.assert_array_equal(v[1, 2], img[8:16, 16:24])
    np.testing.assert_array_equal(unblock(v), img)
    with pytest.raises(ValueError, match="multiples of 8"):
        block_view(np.zeros((10, 16)))
