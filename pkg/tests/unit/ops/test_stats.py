"""Unit tests for wmm_lab.ops.stats and the EntropyTimeline model."""

import numpy as np
import pytest

from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.models.stats import EntropyTimeline
from wmm_lab.ops.init import skewed_init, uniform_init
from wmm_lab.ops.rng import make_rng
from wmm_lab.ops.stats import histogram, kl_to_init, record_epoch, weight_entropy
from wmm_lab.ops.wmm import weight_reinitialization

# ---------------------------------------------------------------------------
# histogram
# ---------------------------------------------------------------------------


class TestHistogram:
    def test_constant_matrix_is_single_bin(self):
        hist = histogram(np.zeros((2, 2)))
        assert hist.counts.tolist() == [4]
        assert hist.bin_edges.tolist() == [-0.5, 0.5]

    def test_two_bins_split_at_midpoint(self):
        hist = histogram(np.array([[0.0, 1.0, 2.0, 3.0]]), bins=2)
        assert hist.counts.tolist() == [2, 2]

    def test_last_bin_is_closed(self):
        hist = histogram(np.array([[0.0, 1.0]]), bins=4)
        assert hist.counts.tolist() == [1, 0, 0, 1]

    def test_uniform_counts_are_flat(self, rng):
        w = rng.uniform(-0.1, 0.1, size=(1000, 1000))
        hist = histogram(w, bins=64)
        expected = w.size / 64
        assert np.all(np.abs(hist.counts - expected) <= 0.05 * expected)
        assert hist.total == w.size
        assert np.all(np.diff(hist.bin_edges) > 0)

    def test_non_finite_values_are_skipped(self):
        assert histogram(np.array([[1.0, np.inf, 2.0]])).total == 2

    def test_empty_matrix_rejected(self):
        with pytest.raises(InvalidArgumentError, match="empty"):
            histogram(np.zeros((0, 3)))

    def test_zero_bins_rejected(self):
        with pytest.raises(InvalidArgumentError, match="bins"):
            histogram(np.ones((2, 2)), bins=0)

    def test_range_of_one_ulp(self):
        w = np.array([[1.0, np.nextafter(1.0, 2.0)], [1.0, 1.0]])
        hist = histogram(w, bins=64)
        assert hist.total == 4
        assert len(hist.counts) == 64
        assert (hist.counts[0], hist.counts[-1]) == (3, 1)
        assert weight_entropy(w, bins=64) == pytest.approx(0.8112781244591328)


# ---------------------------------------------------------------------------
# weight_entropy
# ---------------------------------------------------------------------------


class TestWeightEntropy:
    def test_constant_matrix_has_zero_entropy(self):
        assert weight_entropy(np.full((3, 3), 0.7)) == 0.0

    def test_equally_spaced_values_give_log2_bins(self):
        w = np.linspace(-1.0, 1.0, 64).reshape(8, 8)
        assert weight_entropy(w, bins=64) == pytest.approx(6.0)

    def test_bounded_by_log2_bins(self, rng):
        for bins in (2, 16, 64):
            assert 0.0 <= weight_entropy(uniform_init(50, 50, rng), bins) <= np.log2(bins) + 1e-12

    def test_invariant_under_permutation(self, rng):
        w = skewed_init(20, 30, rng)
        permuted = rng.permutation(w.ravel()).reshape(w.shape)
        assert weight_entropy(permuted) == weight_entropy(w)


# ---------------------------------------------------------------------------
# kl_to_init
# ---------------------------------------------------------------------------


class TestKlToInit:
    def test_fresh_init_is_close_to_zero(self, rng):
        assert kl_to_init(uniform_init(100, 1000, rng)) < 0.005

    def test_point_mass_inside_range_is_six_bits(self):
        cols = 16
        w = np.full((4, cols), 1 / (2 * np.sqrt(cols)))
        assert kl_to_init(w) == pytest.approx(6.0, abs=1e-6)

    def test_out_of_range_mass_is_finite_and_large(self):
        assert 6.0 < kl_to_init(np.full((3, 4), 10.0)) < 60.0

    def test_requires_two_dimensional_matrix(self):
        with pytest.raises(InvalidArgumentError, match="2-D"):
            kl_to_init(np.zeros(4))

    @pytest.mark.slow
    def test_reinitialization_moves_skewed_matrix_towards_init(self):
        w = skewed_init(30, 30, make_rng(100))
        before = kl_to_init(w)
        after = np.mean(
            [kl_to_init(weight_reinitialization(w, 0.3, 1.0, make_rng(seed))[0]) for seed in range(1000)]
        )
        assert after < before


# ---------------------------------------------------------------------------
# record_epoch / EntropyTimeline
# ---------------------------------------------------------------------------


class TestRecordEpoch:
    def test_first_epoch_appends_one_row_per_matrix(self, rng):
        timeline = record_epoch(EntropyTimeline(), 0, {"a.W": uniform_init(5, 5, rng)})
        assert len(timeline.rows) == 1
        assert timeline.last_epoch == 0

    def test_total_is_sum_of_matrices(self, rng):
        tracked = {"a.W": uniform_init(8, 8, rng), "b.W": skewed_init(8, 8, rng)}
        timeline = record_epoch(EntropyTimeline(), 0, tracked)
        total = sum(row.entropy_bits for row in timeline.rows)
        assert all(row.total_bits == pytest.approx(total) for row in timeline.rows)

    def test_untouched_matrix_has_identical_entropy(self, rng):
        tracked = {"a.W": uniform_init(8, 8, rng)}
        timeline = record_epoch(EntropyTimeline(), 0, tracked)
        record_epoch(timeline, 1, tracked)
        assert timeline.rows[0].entropy_bits == timeline.rows[1].entropy_bits

    @pytest.mark.parametrize("epoch", [2, 1])
    def test_non_increasing_epoch_rejected(self, rng, epoch):
        tracked = {"a.W": uniform_init(4, 4, rng)}
        timeline = record_epoch(EntropyTimeline(), 2, tracked)
        with pytest.raises(InvalidArgumentError, match="greater than"):
            record_epoch(timeline, epoch, tracked)

    def test_nothing_tracked_rejected(self):
        with pytest.raises(InvalidArgumentError, match="no matrices"):
            record_epoch(EntropyTimeline(), 0, {})

    def test_csv_has_header_and_lf_endings(self, rng, tmp_path):
        tracked = {"a.W": uniform_init(4, 4, rng)}
        timeline = record_epoch(EntropyTimeline(), 0, tracked)
        record_epoch(timeline, 1, tracked)
        path = tmp_path / "entropy.csv"
        timeline.to_csv(path)
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        lines = raw.decode("utf-8").splitlines()
        assert lines[0] == "epoch,target_id,entropy_bits,total_bits"
        assert [line.split(",")[:2] for line in lines[1:]] == [["0", "a.W"], ["1", "a.W"]]
