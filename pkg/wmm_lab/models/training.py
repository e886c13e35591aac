"""
Pydantic models for training runs.

Classes:
    OptimizerKind: Supported optimizers.
    TrainConfig:   Everything a seeded training run needs besides model and data.
    EpochRecord:   Train/validation loss of one epoch (epoch 0 is the untrained model).
    WmmEvent:      One applied regularization event with before/after entropy.
    RunMetadata:   Wall-clock information, the only non-reproducible part of a report.
    TrainReport:   Result of ``train``.
"""

from datetime import datetime
from enum import StrEnum
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from wmm_lab.core.constants import ADAM_BETAS, ADAM_EPS
from wmm_lab.core.settings import settings
from wmm_lab.models.stats import EntropyTimeline
from wmm_lab.models.types import PositiveInt
from wmm_lab.models.wmm import WmmConfig
from wmm_lab.nn.losses import LossKind

type RunStatus = Literal["ok", "diverged"]


class OptimizerKind(StrEnum):
    SGD = "sgd"
    ADAM = "adam"


class TrainConfig(BaseModel):
    """
    Training run configuration.
    Attributes:
        epochs (int): Maximum number of epochs; 0 evaluates the initial model only.
        batch_size (int): Mini-batch size.
        learning_rate (float): Optimizer step size.
        optimizer (OptimizerKind): SGD or Adam.
        loss (LossKind): MSE for regression, softmax cross-entropy for classification.
        seed (int): Master seed; init, data order and WMM use independent sub-streams.
        wmm (WmmConfig | None): Regularizer applied after every optimizer step.
        l2 (float): L2 penalty coefficient on weight matrices (biases excluded).
        patience (int): Epochs without validation improvement before stopping.
        clip_norm (float | None): Global gradient-norm clip.
        entropy_bins (int): Histogram bins for the entropy timeline and event deltas.
    """

    model_config = ConfigDict(extra="forbid")

    epochs: int = Field(default=20, ge=0)
    batch_size: PositiveInt = 32
    learning_rate: float = Field(default=1e-3, gt=0)
    optimizer: OptimizerKind = OptimizerKind.ADAM
    beta1: float = Field(default=ADAM_BETAS[0], ge=0, lt=1)
    beta2: float = Field(default=ADAM_BETAS[1], ge=0, lt=1)
    eps: float = Field(default=ADAM_EPS, gt=0)
    loss: LossKind = LossKind.MSE
    seed: int = Field(default=0, ge=0, lt=2**64)
    wmm: WmmConfig | None = None
    l2: float = Field(default=0.0, ge=0)
    patience: PositiveInt = 5
    clip_norm: float | None = Field(default=None, gt=0)
    entropy_bins: PositiveInt = Field(default_factory=lambda: settings.compute.entropy_bins)


class EpochRecord(BaseModel):
    epoch: int = Field(..., ge=0)
    train_loss: float
    val_loss: float


class WmmEvent(BaseModel):
    """
    One triggered regularization of one matrix.
    Attributes:
        step (int): Optimizer step after which the event happened (1-based).
        epoch (int): Epoch the step belongs to (1-based).
        matrix_id (str): Resolved matrix id, e.g. ``lstm1.W_x[forget]``.
        mask_size (int): Number of mask-true positions.
        changed (int): Number of elements whose value actually changed.
        entropy_before (float): Matrix entropy just before the event.
        entropy_after (float): Matrix entropy just after the event.
    """

    step: int
    epoch: int
    matrix_id: str
    mask_size: int
    changed: int
    entropy_before: float
    entropy_after: float

    @property
    def entropy_delta(self) -> float:
        return self.entropy_after - self.entropy_before


class RunMetadata(BaseModel):
    created_at: datetime
    wall_clock_seconds: float


class TrainReport(BaseModel):
    """
    Result of one training run.

    Everything except ``metadata`` is a deterministic function of the configuration,
    model and data. ``test_metric`` is evaluated once, on the parameters of
    ``best_epoch``.
    """

    status: RunStatus
    config: TrainConfig
    metric_name: str
    epochs: list[EpochRecord]
    best_epoch: int
    val_metric: float | None
    test_metric: float | None
    timeline: EntropyTimeline
    events: list[WmmEvent] = Field(default_factory=list)
    metadata: RunMetadata
