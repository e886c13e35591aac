"""
Trial Repository persisting a search campaign as JSON lines.
"""

from pathlib import Path

from pydantic import ValidationError

from wmm_lab.core.logging import logger
from wmm_lab.models.search import TrialRecord


class TrialRepository:
    """Append-only JSON-lines store of TrialRecords, one record per line."""

    def __init__(self, path: Path):
        self.path = path

    def find_all(self) -> list[TrialRecord]:
        """
        Return the stored trials in file order.

        A final line cut short by an interrupted write is dropped and the file is
        truncated to its last complete record.
        """
        if not self.path.exists():
            return []
        lines = self.path.read_text(encoding="utf-8").splitlines(keepends=True)
        records: list[TrialRecord] = []
        for number, line in enumerate(lines, start=1):
            try:
                records.append(TrialRecord.model_validate_json(line))
            except ValidationError:
                if number == len(lines) and not line.endswith("\n"):
                    logger.warning("Dropping incomplete last line of %s", self.path)
                    self.path.write_text("".join(lines[:-1]), encoding="utf-8")
                    break
                raise
        logger.debug("Loaded %d trials from %s", len(records), self.path)
        return records

    def completed_indices(self) -> set[int]:
        return {record.trial for record in self.find_all()}

    def append(self, record: TrialRecord) -> TrialRecord:
        """Append one trial. Raises ValueError if its index is already stored."""
        if record.trial in self.completed_indices():
            raise ValueError(f"Trial {record.trial} already exists in {self.path}")
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8", newline="\n") as stream:
            stream.write(record.model_dump_json() + "\n")
        logger.info("Stored trial %d (%s)", record.trial, record.status)
        return record
