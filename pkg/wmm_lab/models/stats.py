"""
Models for entropy instrumentation.

Classes:
    EntropyRow:      Entropy of one tracked matrix at one epoch, plus the network total.
    EntropyTimeline: Ordered per-epoch entropy rows with CSV export.
"""

from pathlib import Path

import pandas as pd
from pydantic import BaseModel, Field

TIMELINE_COLUMNS = ["epoch", "target_id", "entropy_bits", "total_bits"]


class EntropyRow(BaseModel):
    """
    One timeline entry.
    Attributes:
        epoch (int): Epoch index; 0 is the state before the first optimizer step.
        target_id (str): Matrix id as produced by target resolution.
        entropy_bits (float): Shannon entropy of the matrix histogram.
        total_bits (float): Sum of entropies over all matrices tracked at this epoch.
    """

    epoch: int = Field(..., ge=0)
    target_id: str
    entropy_bits: float = Field(..., ge=0)
    total_bits: float = Field(..., ge=0)


class EntropyTimeline(BaseModel):
    """Per-epoch entropy of tracked weight matrices, with strictly increasing epochs."""

    rows: list[EntropyRow] = Field(default_factory=list)

    @property
    def last_epoch(self) -> int | None:
        return self.rows[-1].epoch if self.rows else None

    def totals(self) -> dict[int, float]:
        """Network total entropy keyed by epoch."""
        return {row.epoch: row.total_bits for row in self.rows}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.model_dump() for row in self.rows], columns=TIMELINE_COLUMNS)

    def to_csv(self, path: Path) -> None:
        """Write ``epoch,target_id,entropy_bits,total_bits`` rows (UTF-8, LF line endings)."""
        self.to_frame().to_csv(
            path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g"
        )
