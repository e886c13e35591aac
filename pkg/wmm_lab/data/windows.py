"""
Sliding-window datasets with leakage-free splits.

Windows of one source series always land in the same split: the series pool is
permuted once and every split takes a contiguous block of whole series. Overlapping
windows therefore never straddle a train/test boundary.

Functions:
    sliding_windows: Inputs and next-step targets of one series.
    split_sizes:     Scaled 55,000/5,000/10,000 split sizes.
    window_dataset:  Train/val/test windows from a series pool.
    standardize:     Z-score every split with training statistics.
    save_dataset:    CSV plus JSON sidecar.
    load_dataset:    Inverse of ``save_dataset``.
"""

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import NamedTuple

import numpy as np
import pandas as pd

from wmm_lab.core.constants import FULL_SPLIT, WINDOW
from wmm_lab.core.errors import InsufficientDataError, InvalidArgumentError
from wmm_lab.core.logging import logger
from wmm_lab.models.dataset import SPLIT_NAMES, DatasetSidecar, SplitBoundary, SplitName
from wmm_lab.ops.rng import RngState


@dataclass(frozen=True)
class WindowedDataset:
    """
    Attributes:
        split: Split tag.
        inputs: (n, features) inputs; the window for regression, flat pixels for images.
        targets: (n, 1) next values for regression, (n,) integer labels for classification.
        source_ids: Source series (or image index) of every row.
    """

    split: SplitName
    inputs: np.ndarray
    targets: np.ndarray
    source_ids: np.ndarray

    def __post_init__(self) -> None:
        if not len(self.inputs) == len(self.targets) == len(self.source_ids):
            raise InvalidArgumentError(
                f"split '{self.split}' has {len(self.inputs)} inputs, {len(self.targets)} targets "
                f"and {len(self.source_ids)} source ids"
            )

    def __len__(self) -> int:
        return len(self.inputs)


class DatasetSplits(NamedTuple):
    train: WindowedDataset
    val: WindowedDataset
    test: WindowedDataset


def sliding_windows(series: np.ndarray, window: int = WINDOW) -> tuple[np.ndarray, np.ndarray]:
    """Every length-``window`` slice of ``series`` and the value right after it."""
    if window < 1:
        raise InvalidArgumentError(f"window must be >= 1, got {window}")
    if series.size < window + 1:
        raise InvalidArgumentError(
            f"series of length {series.size} is shorter than window + 1 = {window + 1}"
        )
    inputs = np.lib.stride_tricks.sliding_window_view(series[:-1], window)
    return inputs.copy(), series[window:].reshape(-1, 1).copy()


def split_sizes(scale: float) -> tuple[int, int, int]:
    """
    Round each of 55,000/5,000/10,000 times ``scale`` half-up.

    Raises:
        InvalidArgumentError: If ``scale`` is outside (0, 1] or any split would be empty.
    """
    if not 0 < scale <= 1:
        raise InvalidArgumentError(f"scale must be in (0, 1], got {scale}")
    sizes = tuple(int(math.floor(size * scale + 0.5)) for size in FULL_SPLIT)
    for name, size in zip(SPLIT_NAMES, sizes, strict=True):
        if size == 0:
            raise InvalidArgumentError(f"scale {scale} leaves the {name} split empty")
    return sizes  # type: ignore[return-value]


def window_dataset(
    pool: np.ndarray,
    sizes: tuple[int, int, int],
    rng: RngState,
    window: int = WINDOW,
) -> DatasetSplits:
    """
    Cut exactly ``sizes`` windows into train/val/test from a (series, samples) pool.

    The pool order is permuted with ``rng``; each split then consumes whole series
    from its own contiguous block of that order. Only the last series of a block may
    be used partially.

    Raises:
        InvalidArgumentError: If the pool is not 2-D, a size is negative or the series are too short.
        InsufficientDataError: If the pool holds fewer series than the sizes need.
    """
    if pool.ndim != 2:
        raise InvalidArgumentError(f"pool must be 2-D (series, samples), got shape {pool.shape}")
    if any(size < 0 for size in sizes):
        raise InvalidArgumentError(f"split sizes must be >= 0, got {sizes}")
    per_series = pool.shape[1] - window
    if per_series < 1:
        raise InvalidArgumentError(
            f"series of length {pool.shape[1]} is shorter than window + 1 = {window + 1}"
        )

    needed = [math.ceil(size / per_series) for size in sizes]
    shortfall = sum(needed) - pool.shape[0]
    if shortfall > 0:
        raise InsufficientDataError(
            f"need {sum(needed)} series for split sizes {sizes} but the pool has {pool.shape[0]} "
            f"(short by {shortfall} series, {shortfall * per_series} windows)",
            shortfall=shortfall,
        )

    order = rng.permutation(pool.shape[0])
    splits = []
    start = 0
    for name, size, count in zip(SPLIT_NAMES, sizes, needed, strict=True):
        block = order[start : start + count]
        start += count
        inputs, targets, ids = [], [], []
        for series_id in block:
            x, y = sliding_windows(pool[series_id], window)
            inputs.append(x)
            targets.append(y)
            ids.append(np.full(len(x), series_id))
        if block.size:
            x_all = np.concatenate(inputs)[:size]
            y_all = np.concatenate(targets)[:size]
            id_all = np.concatenate(ids)[:size]
        else:
            x_all, y_all = np.empty((0, window)), np.empty((0, 1))
            id_all = np.empty(0, dtype=np.int64)
        splits.append(WindowedDataset(name, x_all, y_all, id_all))
    return DatasetSplits(*splits)


def standardize(splits: DatasetSplits) -> tuple[DatasetSplits, float, float]:
    """
    Z-score inputs and targets of every split with the training inputs' mean and std.

    Returns:
        The scaled splits, the mean and the std.
    """
    mean = float(splits.train.inputs.mean())
    std = float(splits.train.inputs.std())
    if std == 0.0:
        std = 1.0

    def scale(dataset: WindowedDataset) -> WindowedDataset:
        return replace(
            dataset, inputs=(dataset.inputs - mean) / std, targets=(dataset.targets - mean) / std
        )

    return DatasetSplits(*(scale(dataset) for dataset in splits)), mean, std


def sidecar_path(path: Path) -> Path:
    return path.with_suffix(".json")


def save_dataset(splits: DatasetSplits, path: Path, sidecar: DatasetSidecar) -> DatasetSidecar:
    """
    Write one CSV row per window (``x0..x{w-1},target,split,source_id``) and the
    JSON sidecar next to it. Split boundaries in the returned sidecar are filled in
    from ``splits``.
    """
    frames, boundaries, row = [], {}, 0
    for dataset in splits:
        columns = [f"x{i}" for i in range(dataset.inputs.shape[1])]
        frame = pd.DataFrame(dataset.inputs, columns=columns)
        frame["target"] = dataset.targets.reshape(len(dataset), -1)[:, 0]
        frame["split"] = dataset.split
        frame["source_id"] = dataset.source_ids.astype(np.int64)
        frames.append(frame)
        series_ids = [int(i) for i in dict.fromkeys(dataset.source_ids.tolist())]
        boundaries[dataset.split] = SplitBoundary(
            start=row, stop=row + len(dataset), series_ids=series_ids
        )
        row += len(dataset)

    sidecar = sidecar.model_copy(update={"splits": boundaries})
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.concat(frames, ignore_index=True).to_csv(
        path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g"
    )
    sidecar_path(path).write_text(sidecar.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info("Wrote %d windows to %s", row, path)
    return sidecar


def load_dataset(path: Path) -> tuple[DatasetSplits, DatasetSidecar]:
    """
    Read a CSV written by ``save_dataset`` together with its sidecar.

    Raises:
        FileNotFoundError: If either file is missing.
        InvalidArgumentError: If the CSV and the sidecar disagree on the split layout.
    """
    sidecar = DatasetSidecar.model_validate_json(sidecar_path(path).read_text(encoding="utf-8"))
    frame = pd.read_csv(path, float_precision="round_trip")
    input_columns = [f"x{i}" for i in range(sidecar.window)]
    splits = []
    for name in SPLIT_NAMES:
        part = frame[frame["split"] == name]
        boundary = sidecar.splits[name]
        if len(part) != boundary.stop - boundary.start:
            raise InvalidArgumentError(
                f"{path}: split '{name}' has {len(part)} rows, sidecar declares {boundary.stop - boundary.start}"
            )
        splits.append(
            WindowedDataset(
                name,
                part[input_columns].to_numpy(dtype=np.float64),
                part[["target"]].to_numpy(dtype=np.float64),
                part["source_id"].to_numpy(dtype=np.int64),
            )
        )
    return DatasetSplits(*splits), sidecar
