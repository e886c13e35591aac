"""
Experiment specification documents read by the CLI.

Classes:
    TaskKind:       Dataset family of an experiment.
    ModelPreset:    Architecture family (MLP or 2 LSTM + 1 dense).
    InitScheme:     Weight initialization of a preset.
    ModelSpec:      Preset, hidden widths and init scheme.
    ExperimentSpec: Task, model, training config, optional search space.
"""

from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wmm_lab.core.constants import (
    DEFAULT_NOISE_EXPONENT,
    DEFAULT_SNR_DB,
    DESK_SCALE,
    WINDOWS_PER_SERIES,
)
from wmm_lab.models.search import SearchSpace
from wmm_lab.models.training import TrainConfig
from wmm_lab.models.types import PositiveInt
from wmm_lab.models.wmm import WmmTarget
from wmm_lab.nn.losses import LossKind


class TaskKind(StrEnum):
    SYNTHETIC = "synthetic"
    SYNTHETIC_NOISE = "synthetic-noise"
    MNIST_MLP = "mnist-mlp"
    MNIST_SEQUENTIAL = "mnist-sequential"

    @property
    def is_classification(self) -> bool:
        return self in (TaskKind.MNIST_MLP, TaskKind.MNIST_SEQUENTIAL)


class ModelPreset(StrEnum):
    MLP = "mlp"
    LSTM = "lstm"


class InitScheme(StrEnum):
    UNIFORM = "uniform"
    SKEWED = "skewed"


class ModelSpec(BaseModel):
    """
    Attributes:
        preset (ModelPreset): ``mlp`` stacks tanh dense layers; ``lstm`` stacks LSTM layers
            and ends with one dense layer.
        hidden (list[int] | None): Hidden widths; defaults to [32] for mlp, [16, 16] for lstm.
        init (InitScheme): Weight initialization; biases always start at zero.
    """

    model_config = ConfigDict(extra="forbid")

    preset: ModelPreset = ModelPreset.MLP
    hidden: list[PositiveInt] | None = None
    init: InitScheme = InitScheme.UNIFORM

    @property
    def hidden_sizes(self) -> list[int]:
        if self.hidden is not None:
            return self.hidden
        return [32] if self.preset is ModelPreset.MLP else [16, 16]


class ExperimentSpec(BaseModel):
    """
    A single JSON document describing a run or a campaign. All defaults are
    materialized into reports so every output is self-describing.

    Attributes:
        task (TaskKind): Dataset family.
        model (ModelSpec): Architecture.
        train (TrainConfig): Training configuration (seed included).
        search (SearchSpace | None): Required by ``search``.
        tracked (list[WmmTarget] | None): Matrices recorded in the entropy timeline; ``None``
            tracks the WMM targets, or every layer when WMM is off.
        scale (float): Fraction of the 55,000/5,000/10,000 split to use.
        data_seed (int): Seed of dataset generation, independent of training seeds.
        data_path (Path | None): Dataset CSV written by ``gen-data``; generated on the
            fly when absent.
        snr_db (float): Signal-to-noise ratio of the noisy synthetic task.
        noise_exponent (float): Spectral exponent of the colored noise.
        mnist_dir (Path | None): Directory of the IDX files for MNIST tasks.
        windows_per_series (int): Windows cut from every generated series.
        output_dir (Path): Default destination of reports when ``--out`` is not given.
    """

    model_config = ConfigDict(extra="forbid")

    task: TaskKind = TaskKind.SYNTHETIC
    model: ModelSpec = Field(default_factory=ModelSpec)
    train: TrainConfig = Field(default_factory=TrainConfig)
    search: SearchSpace | None = None
    tracked: list[WmmTarget] | None = None
    scale: float = Field(default=DESK_SCALE, gt=0, le=1)
    data_seed: int = Field(default=0, ge=0, lt=2**64)
    data_path: Path | None = None
    snr_db: float = DEFAULT_SNR_DB
    noise_exponent: float = Field(default=DEFAULT_NOISE_EXPONENT, ge=0)
    mnist_dir: Path | None = None
    windows_per_series: PositiveInt = WINDOWS_PER_SERIES
    output_dir: Path = Path("output")

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentSpec":
        """Read and validate a JSON spec. Raises OSError or pydantic.ValidationError."""
        return cls.model_validate_json(path.read_text(encoding="utf-8"))

    @model_validator(mode="after")
    def loss_matches_task(self) -> "ExperimentSpec":
        expected = LossKind.CROSS_ENTROPY if self.task.is_classification else LossKind.MSE
        if self.train.loss is not expected:
            raise ValueError(f"task '{self.task}' requires train.loss = '{expected}'")
        if self.data_path is not None and not self.data_path.exists():
            raise ValueError(f"data_path does not exist: {self.data_path}")
        return self
