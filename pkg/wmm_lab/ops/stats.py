"""
Histogram, entropy and KL instrumentation of weight matrices.

The entropy estimator bins a matrix over its own [min, max] range, so it depends on
the value multiset only: permuting elements (weight shuffling) cannot change it.

Functions:
    histogram:    Equal-width histogram over [min(w), max(w)].
    weight_entropy: Shannon entropy (bits) of that histogram.
    kl_to_init:   KL divergence (bits) from the discretized init distribution U_w.
    record_epoch: Append one epoch of per-matrix entropies to a timeline.
"""

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from wmm_lab.core.constants import DEFAULT_BINS, KL_FLOOR
from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.models.stats import EntropyRow, EntropyTimeline
from wmm_lab.ops.init import init_bound


@dataclass(frozen=True)
class Histogram:
    """``bin_edges`` has one more entry than ``counts``; the last bin is closed."""

    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def frequencies(self) -> np.ndarray:
        return self.counts / self.total


def _finite_values(w: np.ndarray, bins: int) -> np.ndarray:
    if bins < 1:
        raise InvalidArgumentError(f"bins must be >= 1, got {bins}")
    values = np.asarray(w, dtype=np.float64).ravel()
    values = values[np.isfinite(values)]
    if values.size == 0:
        raise InvalidArgumentError("cannot bin an empty matrix")
    return values


def _entropy_bits(counts: np.ndarray) -> float:
    q = counts[counts > 0] / counts.sum()
    entropy = float(-np.sum(q * np.log2(q)))
    return entropy if entropy > 0.0 else 0.0


def histogram(w: np.ndarray, bins: int = DEFAULT_BINS) -> Histogram:
    """
    Bin the finite values of ``w`` into ``bins`` equal-width bins over [min, max].

    A single-point range yields one bin holding every element.

    Raises:
        InvalidArgumentError: If the matrix is empty or ``bins`` < 1.
    """
    values = _finite_values(w, bins)
    low, high = float(values.min()), float(values.max())
    if low == high:
        return Histogram(np.array([low - 0.5, high + 0.5]), np.array([values.size]))
    edges = np.linspace(low, high, bins + 1)
    if np.all(np.diff(edges) > 0):
        counts, edges = np.histogram(values, bins=bins, range=(low, high))
        return Histogram(edges, counts)
    # range narrower than the bin count in ULPs: index bins arithmetically
    index = np.minimum(((values - low) / (high - low) * bins).astype(np.int64), bins - 1)
    return Histogram(edges, np.bincount(index, minlength=bins))


def weight_entropy(w: np.ndarray, bins: int = DEFAULT_BINS) -> float:
    """Shannon entropy in bits of ``histogram(w, bins)``; 0 for constant matrices."""
    return _entropy_bits(histogram(w, bins).counts)


def kl_to_init(w: np.ndarray, bins: int = DEFAULT_BINS) -> float:
    """
    KL(q || u) in bits between the empirical distribution of ``w`` and U_w.

    q is binned over ``bins`` equal-width bins spanning [-1/sqrt(cols), +1/sqrt(cols)]
    plus one overflow bin on each side. u is uniform over the in-range bins and puts a
    ``KL_FLOOR`` mass on each overflow bin so the divergence stays finite.
    """
    if w.ndim != 2:
        raise InvalidArgumentError(f"expected a 2-D weight matrix, got shape {w.shape}")
    values = _finite_values(w, bins)
    bound = init_bound(w.shape[1])
    inner, _ = np.histogram(values, bins=np.linspace(-bound, bound, bins + 1))
    counts = np.concatenate(
        ([np.count_nonzero(values < -bound)], inner, [np.count_nonzero(values > bound)])
    )
    q = counts / values.size
    reference = np.full(bins + 2, (1.0 - 2.0 * KL_FLOOR) / bins)
    reference[0] = reference[-1] = KL_FLOOR
    nonzero = q > 0
    divergence = float(np.sum(q[nonzero] * np.log2(q[nonzero] / reference[nonzero])))
    return max(divergence, 0.0)


def record_epoch(
    timeline: EntropyTimeline,
    epoch: int,
    tracked: Mapping[str, np.ndarray],
    bins: int = DEFAULT_BINS,
) -> EntropyTimeline:
    """
    Append the entropy of every tracked matrix at ``epoch``.

    Raises:
        InvalidArgumentError: If ``epoch`` does not exceed the last recorded epoch,
            or nothing is tracked.
    """
    if timeline.last_epoch is not None and epoch <= timeline.last_epoch:
        raise InvalidArgumentError(
            f"epoch {epoch} must be greater than the last recorded epoch {timeline.last_epoch}"
        )
    if not tracked:
        raise InvalidArgumentError("no matrices to record")
    entropies = {matrix_id: weight_entropy(w, bins) for matrix_id, w in tracked.items()}
    total = sum(entropies.values())
    timeline.rows.extend(
        EntropyRow(epoch=epoch, target_id=matrix_id, entropy_bits=bits, total_bits=total)
        for matrix_id, bits in entropies.items()
    )
    return timeline
