"""
JSON sidecar written next to a generated dataset CSV.

The sidecar records everything needed to regenerate the file: task, window,
scale, seeds, noise settings, the recipes of every source series and the row
boundaries and source series of every split.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from wmm_lab.data.synthetic import SeriesRecipe

type SplitName = Literal["train", "val", "test"]

SPLIT_NAMES: tuple[SplitName, ...] = ("train", "val", "test")


class SplitBoundary(BaseModel):
    """Rows ``[start, stop)`` of the CSV and the source series they were cut from."""

    start: int = Field(..., ge=0)
    stop: int = Field(..., ge=0)
    series_ids: list[int]


class DatasetSidecar(BaseModel):
    model_config = ConfigDict(extra="forbid")

    task: str
    window: int
    scale: float
    data_seed: int
    snr_db: float | None = None
    noise_exponent: float | None = None
    standardized: bool = False
    splits: dict[SplitName, SplitBoundary] = Field(default_factory=dict)
    recipes: list[SeriesRecipe] = Field(default_factory=list)
