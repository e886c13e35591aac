"""
Pydantic models for hyper-parameter search campaigns.

Classes:
    CampaignMethod: Regularizer searched by a campaign; ``none`` is the L2 reference.
    SearchSpace:    Log-uniform intervals for p and c, eligible targets, L2 settings.
    TrialRecord:    One trial: sampled settings, seed, metrics, entropy summary, status.
    TopKSummary:    Mean/std over the k best successful trials plus the single best.
"""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from wmm_lab.core.constants import C_RANGE, P_RANGE
from wmm_lab.models.training import RunStatus
from wmm_lab.models.wmm import WmmTarget


class CampaignMethod(StrEnum):
    REINIT = "reinit"
    SHUFFLE = "shuffle"
    NONE = "none"


class SearchSpace(BaseModel):
    """
    Attributes:
        method (CampaignMethod): Fixed per campaign.
        p_range (tuple[float, float]): Closed log-uniform interval of the trigger probability.
        c_range (tuple[float, float]): Closed log-uniform interval of the coverage.
        targets (list[WmmTarget] | None): Eligible (layer, gate) targets; ``None`` means
            every dense layer and every LSTM gate of the model.
        l2 (float): L2 coefficient used by WMM campaigns.
        l2_grid (list[float]): Candidates sampled uniformly by the reference campaign.
        shuffle_density (float): Bernoulli density of the shuffle mask.
    """

    model_config = ConfigDict(extra="forbid")

    method: CampaignMethod
    p_range: tuple[float, float] = P_RANGE
    c_range: tuple[float, float] = C_RANGE
    targets: list[WmmTarget] | None = None
    l2: float = Field(default=0.0, ge=0)
    l2_grid: list[float] = Field(default_factory=lambda: [0.0, 1e-5, 1e-4, 1e-3], min_length=1)
    shuffle_density: float = Field(default=0.5, ge=0, le=1)

    @model_validator(mode="after")
    def ranges_must_be_positive(self) -> "SearchSpace":
        for name, (low, high) in (("p_range", self.p_range), ("c_range", self.c_range)):
            if not 0 < low <= high <= 1:
                raise ValueError(f"{name} must satisfy 0 < low <= high <= 1, got ({low}, {high})")
        if any(value < 0 for value in self.l2_grid):
            raise ValueError("l2_grid values must be >= 0")
        return self


class TrialRecord(BaseModel):
    """
    One search trial. WMM fields are ``None`` for reference trials; metrics are
    ``None`` when the trial diverged.
    """

    trial: int = Field(..., ge=0)
    method: CampaignMethod
    p: float | None
    c: float | None
    p_times_c: float | None
    target: str | None
    seed: int
    l2: float
    val_metric: float | None
    test_metric: float | None
    entropy_bits: float | None
    status: RunStatus

    @model_validator(mode="after")
    def completed_trials_have_metrics(self) -> "TrialRecord":
        if self.status == "ok" and (self.val_metric is None or self.test_metric is None):
            raise ValueError("completed trials must carry validation and test metrics")
        return self


class TopKSummary(BaseModel):
    method: CampaignMethod
    metric: str
    k: int
    ok_trials: int
    mean: float
    std: float
    best: TrialRecord
    mean_entropy_bits: float | None = None
