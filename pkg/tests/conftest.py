"""
Shared pytest fixtures for the wmm_lab test suite.

Fixture scopes:
- rng: function-scoped seeded generator, fresh for every test.
- tiny_splits: small standardized regression dataset cut from a synthetic pool.
- tiny_spec: desk-sized experiment spec (1% scale, few epochs) for service and CLI tests.
- spec_file: tiny_spec written to a temporary JSON file, as the CLI expects it.
"""

import numpy as np
import pytest

from wmm_lab.data.synthetic import build_series_pool
from wmm_lab.data.windows import DatasetSplits, standardize, window_dataset
from wmm_lab.models.experiment import ExperimentSpec, ModelSpec
from wmm_lab.models.training import TrainConfig
from wmm_lab.ops.rng import make_rng


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)


@pytest.fixture
def tiny_splits() -> DatasetSplits:
    """200/50/50 windows of length 50 from 8 synthetic series of 100 samples."""
    _, pool = build_series_pool(8, make_rng(7, 0))
    splits = window_dataset(pool, (200, 50, 50), make_rng(7, 1))
    scaled, _, _ = standardize(splits)
    return scaled


@pytest.fixture
def tiny_spec(tmp_path) -> ExperimentSpec:
    return ExperimentSpec(
        model=ModelSpec(hidden=[8]),
        train=TrainConfig(epochs=2, batch_size=32, learning_rate=1e-2, seed=11),
        scale=0.01,
        output_dir=tmp_path / "out",
    )


@pytest.fixture
def spec_file(tmp_path, tiny_spec):
    path = tmp_path / "spec.json"
    path.write_text(tiny_spec.model_dump_json(indent=2), encoding="utf-8")
    return path
