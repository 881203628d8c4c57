"""Non-maximum suppression and hysteresis thresholding."""

import numpy as np
import pytest

from speccon.thinning import binarize, nms


class TestNms:
    def test_interior_impulse_preserved(self):
        m = np.zeros((9, 9))
        m[4, 4] = 0.8
        out = nms(m)
        assert out[4, 4] == 0.8
        assert np.count_nonzero(out) == 1

    def test_constant_map_all_suppressed(self):
        out = nms(np.full((9, 9), 0.3))
        assert not out.any()

    def test_vertical_ridge_preserved_exactly(self):
        m = np.zeros((11, 9))
        m[:, 4] = 1.0
        assert np.array_equal(nms(m), m)

    def test_output_pointwise_bounded_by_input(self):
        rng = np.random.default_rng(0)
        m = rng.random((15, 15))
        out = nms(m)
        assert np.all(out <= m)
        assert np.all((out > 0) <= (m > 0))

    def test_idempotent_on_isolated_ridge(self):
        m = np.zeros((11, 9))
        m[:, 4] = 0.7
        once = nms(m)
        assert np.array_equal(nms(once), once)

    def test_diagonal_interpolation(self):
        # A diagonal ridge survives along its crest; near the ridge ends
        # the gradient points along the ridge and suppresses.
        m = np.zeros((9, 9))
        for i in range(1, 8):
            m[i, i] = 1.0
        out = nms(m)
        kept = {tuple(p) for p in np.argwhere(out > 0)}
        assert {(i, i) for i in range(3, 6)} <= kept
        assert all(r == c for r, c in kept)

    def test_too_small_rejected(self):
        with pytest.raises(ValueError, match="too small"):
            nms(np.zeros((2, 5)))


class TestBinarize:
    def test_zero_thresholds_keep_positive_pixels(self):
        m = np.array([[0.0, 0.2], [0.0, 0.7]])
        out = binarize(m, 0.0, 0.0)
        assert np.array_equal(out, m > 0)

    def test_threshold_one_empty_when_max_below_one(self):
        m = np.full((3, 3), 0.9)
        assert not binarize(m, 1.0, 1.0).any()

    def test_simple_threshold_inclusive(self):
        m = np.array([[0.5, 0.49], [0.51, 0.0]])
        out = binarize(m, 0.5, 0.5)
        assert np.array_equal(out, np.array([[True, False], [True, False]]))

    def test_hysteresis_chain(self):
        m = np.zeros((3, 5))
        m[1, 1:4] = [0.9, 0.2, 0.9]
        out = binarize(m, 0.1, 0.5)
        assert np.array_equal(np.argwhere(out), [[1, 1], [1, 2], [1, 3]])

    def test_hysteresis_requires_seed(self):
        m = np.zeros((3, 5))
        m[1, 1:4] = [0.3, 0.2, 0.3]
        assert not binarize(m, 0.1, 0.5).any()

    def test_hysteresis_8_connectivity(self):
        m = np.zeros((4, 4))
        m[0, 0] = 0.9
        m[1, 1] = 0.2
        m[2, 2] = 0.2
        m[3, 3] = 0.2
        out = binarize(m, 0.1, 0.5)
        assert out[0, 0] and out[1, 1] and out[2, 2] and out[3, 3]

    def test_monotone_in_high(self):
        rng = np.random.default_rng(1)
        m = nms(rng.random((12, 12)))
        previous = None
        for high in (0.2, 0.4, 0.6, 0.8):
            edges = binarize(m, 0.1, high)
            if previous is not None:
                assert not (edges & ~previous).any()
            previous = edges

    def test_low_above_high_rejected(self):
        with pytest.raises(ValueError, match="low"):
            binarize(np.zeros((3, 3)), 0.8, 0.2)

    def test_thresholds_outside_unit_interval_rejected(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            binarize(np.zeros((3, 3)), 0.1, 1.01)
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            binarize(np.zeros((3, 3)), -0.1, 0.5)
