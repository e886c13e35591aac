"""
Pydantic models describing weight-matrix modification (WMM) settings.

Classes:
    WmmMethod:  Which operator runs when the trigger fires (reinit or shuffle).
    Gate:       LSTM gate names, in the fixed row-block order of the stacked matrices.
    WmmTarget:  A (layer, optional gate) pair addressed by the regularizer.
    WmmConfig:  Per-run regularizer settings: method, p, c, targets, shuffle density.
    WindowSpec: Rectangular sub-region of a host matrix.
"""

from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from wmm_lab.core.constants import DEFAULT_SHUFFLE_DENSITY
from wmm_lab.models.types import Coverage, PositiveInt, Probability


class WmmMethod(StrEnum):
    """
    Regularizer applied to a triggered weight matrix.
    Attributes:
        REINIT: Reset a sparse windowed subset to fresh draws from the init distribution.
        SHUFFLE: Permute a Bernoulli-masked windowed subset among itself.
    """

    REINIT = "reinit"
    SHUFFLE = "shuffle"


class Gate(StrEnum):
    """LSTM gate names. Declaration order is the row-block order of W_x and W_h."""

    INPUT = "input"
    FORGET = "forget"
    CELL = "cell"
    OUTPUT = "output"


GATE_ORDER: tuple[Gate, ...] = tuple(Gate)


class WmmTarget(BaseModel):
    """
    A layer, or one gate of a recurrent layer, addressed by the regularizer.

    Accepts either ``{"layer": "lstm1", "gate": "forget"}`` or the compact string
    form ``"lstm1:forget"`` / ``"dense"``.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    layer: str = Field(..., min_length=1)
    gate: Gate | None = None

    @model_validator(mode="before")
    @classmethod
    def parse_compact_form(cls, data: object) -> object:
        if isinstance(data, str):
            layer, _, gate = data.partition(":")
            return {"layer": layer, "gate": gate or None}
        return data

    def __str__(self) -> str:
        return self.layer if self.gate is None else f"{self.layer}:{self.gate.value}"


class WmmConfig(BaseModel):
    """
    Regularizer settings for one training run.
    Attributes:
        method (WmmMethod): Operator applied when the trigger fires.
        p (float): Per-step, per-matrix trigger probability; also the reinit mask sparsity.
        c (float): Coverage, the per-dimension fraction of the window extents.
        targets (list[WmmTarget]): Affected layers or gates. Biases are never targeted.
        shuffle_density (float): Bernoulli density of the shuffle mask, independent of p.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: WmmMethod
    p: Probability
    c: Coverage
    targets: list[WmmTarget] = Field(..., min_length=1)
    shuffle_density: Probability = DEFAULT_SHUFFLE_DENSITY

    @field_validator("targets")
    @classmethod
    def targets_must_be_unique(cls, v: list[WmmTarget]) -> list[WmmTarget]:
        if len(set(v)) != len(v):
            raise ValueError("targets must not contain duplicates")
        return v


class WindowSpec(BaseModel):
    """Rectangular window given by its top-left corner and extents."""

    model_config = ConfigDict(frozen=True)

    top: int = Field(..., ge=0)
    left: int = Field(..., ge=0)
    height: PositiveInt
    width: PositiveInt

    @property
    def area(self) -> int:
        return self.height * self.width

    @property
    def slices(self) -> tuple[slice, slice]:
        return (
            slice(self.top, self.top + self.height),
            slice(self.left, self.left + self.width),
        )

    def fits(self, rows: int, cols: int) -> bool:
        """Return True when the window lies inside a ``rows`` x ``cols`` matrix."""
        return self.top + self.height <= rows and self.left + self.width <= cols
