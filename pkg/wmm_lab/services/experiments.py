"""
Resolution of an ExperimentSpec into data, a model and a training run.

Functions:
    generate_dataset: Synthetic (optionally noisy) splits plus the sidecar describing them.
    load_task:        Splits and network geometry for a spec.
    build_network:    Fresh network seeded from the init stream of a master seed.
    effective_config: Training config with preset-dependent defaults materialized.
    run_experiment:   One seeded training run.
"""

import math
from dataclasses import dataclass

from wmm_lab.core.constants import RECURRENT_CLIP_NORM, STREAM_INIT, WINDOW
from wmm_lab.core.errors import InvalidArgumentError
from wmm_lab.core.logging import logger
from wmm_lab.core.settings import settings
from wmm_lab.data.idx import load_mnist
from wmm_lab.data.synthetic import build_series_pool, noise_pool
from wmm_lab.data.windows import (
    DatasetSplits,
    load_dataset,
    split_sizes,
    standardize,
    window_dataset,
)
from wmm_lab.models.dataset import DatasetSidecar
from wmm_lab.models.experiment import ExperimentSpec, ModelPreset, TaskKind
from wmm_lab.models.training import TrainConfig, TrainReport
from wmm_lab.nn.network import Network
from wmm_lab.nn.presets import build_model
from wmm_lab.ops.rng import make_rng
from wmm_lab.services.training import train

MNIST_CLASSES = 10
MNIST_ROW = 28

# sub-streams of the data seed
RECIPE_STREAM = 0
SPLIT_STREAM = 1
NOISE_STREAM = 2


@dataclass(frozen=True)
class PreparedTask:
    splits: DatasetSplits
    input_size: int
    output_size: int
    sequence_features: int


def generate_dataset(
    task: TaskKind,
    scale: float,
    data_seed: int,
    snr_db: float,
    noise_exponent: float,
    windows_per_series: int,
) -> tuple[DatasetSplits, DatasetSidecar]:
    """
    Generate the windowed synthetic dataset for ``task``.

    Recipes, split assignment and noise each draw from their own sub-stream of
    ``data_seed``, so the noisy dataset equals the clean one plus the noise windows.

    Raises:
        InvalidArgumentError: For MNIST tasks (read from IDX files instead) or a scale
            that leaves a split empty.
    """
    if task.is_classification:
        raise InvalidArgumentError(f"task '{task}' is read from IDX files and cannot be generated")
    sizes = split_sizes(scale)
    count = sum(math.ceil(size / windows_per_series) for size in sizes)
    recipes, pool = build_series_pool(
        count, make_rng(data_seed, RECIPE_STREAM), length=WINDOW + windows_per_series
    )
    noisy = task is TaskKind.SYNTHETIC_NOISE
    if noisy:
        pool = pool + noise_pool(pool, snr_db, noise_exponent, make_rng(data_seed, NOISE_STREAM))
    splits = window_dataset(pool, sizes, make_rng(data_seed, SPLIT_STREAM), window=WINDOW)
    sidecar = DatasetSidecar(
        task=task.value,
        window=WINDOW,
        scale=scale,
        data_seed=data_seed,
        snr_db=snr_db if noisy else None,
        noise_exponent=noise_exponent if noisy else None,
        recipes=recipes,
    )
    logger.info("Generated %s dataset with splits %s", task.value, sizes)
    return splits, sidecar


def load_task(spec: ExperimentSpec) -> PreparedTask:
    """
    Load or generate the splits of ``spec``. Regression data is standardized with
    training statistics.

    Raises:
        InvalidArgumentError: If an MNIST task has no IDX directory configured.
        FileNotFoundError: If a data file is missing.
    """
    if spec.task.is_classification:
        directory = spec.mnist_dir or settings.data.mnist_dir
        if directory is None:
            raise InvalidArgumentError(
                f"task '{spec.task}' needs IDX files: set mnist_dir or WMM_LAB_MNIST_DIR"
            )
        splits = load_mnist(directory, spec.scale)
        sequential = spec.task is TaskKind.MNIST_SEQUENTIAL
        features = MNIST_ROW if sequential else splits.train.inputs.shape[1]
        return PreparedTask(splits, splits.train.inputs.shape[1], MNIST_CLASSES, features)

    if spec.data_path is not None:
        splits, _ = load_dataset(spec.data_path)
    else:
        splits, _ = generate_dataset(
            spec.task,
            spec.scale,
            spec.data_seed,
            spec.snr_db,
            spec.noise_exponent,
            spec.windows_per_series,
        )
    splits, _, _ = standardize(splits)
    return PreparedTask(splits, splits.train.inputs.shape[1], 1, 1)


def effective_config(spec: ExperimentSpec) -> TrainConfig:
    """``spec.train`` with the recurrent gradient clip filled in for LSTM presets."""
    if spec.model.preset is ModelPreset.LSTM and spec.train.clip_norm is None:
        return spec.train.model_copy(update={"clip_norm": RECURRENT_CLIP_NORM})
    return spec.train


def build_network(spec: ExperimentSpec, task: PreparedTask, seed: int) -> Network:
    return build_model(
        spec.model,
        task.input_size,
        task.output_size,
        spec.train.loss,
        make_rng(seed, STREAM_INIT),
        sequence_features=task.sequence_features,
    )


def run_experiment(
    spec: ExperimentSpec, task: PreparedTask | None = None, cfg: TrainConfig | None = None
) -> TrainReport:
    """
    Build a fresh network from the init stream of ``cfg.seed`` and train it.

    Args:
        spec: Experiment document.
        task: Prepared data, loaded from ``spec`` when omitted.
        cfg: Training config overriding ``spec.train`` (used by search trials).
    """
    task = task or load_task(spec)
    cfg = cfg or effective_config(spec)
    network = build_network(spec, task, cfg.seed)
    return train(network, task.splits, cfg, spec.tracked)
