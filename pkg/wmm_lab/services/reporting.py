"""
Cross-campaign comparison of search summaries.

A results directory holds one sub-directory per campaign, each with a
``summary.json``. WMM campaigns are represented by their top-k mean, the
reference campaign (method ``none``) by its single best trial.
"""

from pathlib import Path

import pandas as pd

from wmm_lab.core.logging import logger
from wmm_lab.models.search import CampaignMethod, TopKSummary

SUMMARY_FILE = "summary.json"
COMPARISON_FILE = "comparison.csv"
COMPARISON_COLUMNS = [
    "campaign",
    "method",
    "metric",
    "k",
    "ok_trials",
    "headline",
    "std",
    "best",
    "entropy_bits",
    "metric_ratio",
    "entropy_ratio",
]


def headline(summary: TopKSummary) -> float:
    """Top-k mean for WMM campaigns, best trial for the reference."""
    if summary.method is CampaignMethod.NONE:
        value = getattr(summary.best, summary.metric)
        return float(value)
    return summary.mean


def collect_summaries(root: Path) -> dict[str, TopKSummary]:
    """Read ``<root>/<campaign>/summary.json`` for every campaign directory, sorted by name."""
    if not root.is_dir():
        raise FileNotFoundError(f"results directory not found: {root}")
    summaries = {}
    for path in sorted(root.glob(f"*/{SUMMARY_FILE}")):
        summaries[path.parent.name] = TopKSummary.model_validate_json(
            path.read_text(encoding="utf-8")
        )
    logger.debug("Found %d campaign summaries under %s", len(summaries), root)
    return summaries


def build_comparison(summaries: dict[str, TopKSummary]) -> pd.DataFrame:
    """
    One row per campaign with metric and entropy ratios to the reference campaign.

    Ratios are empty when no reference campaign is present.
    """
    reference = next(
        (summary for summary in summaries.values() if summary.method is CampaignMethod.NONE), None
    )
    if reference is None:
        logger.warning("No reference campaign found; ratios are left empty")
    rows = []
    for name, summary in summaries.items():
        value = headline(summary)
        entropy = summary.mean_entropy_bits
        metric_ratio = entropy_ratio = None
        if reference is not None:
            base = headline(reference)
            metric_ratio = value / base if base else None
            if entropy is not None and reference.mean_entropy_bits:
                entropy_ratio = entropy / reference.mean_entropy_bits
        rows.append(
            {
                "campaign": name,
                "method": summary.method.value,
                "metric": summary.metric,
                "k": summary.k,
                "ok_trials": summary.ok_trials,
                "headline": value,
                "std": summary.std,
                "best": getattr(summary.best, summary.metric),
                "entropy_bits": entropy,
                "metric_ratio": metric_ratio,
                "entropy_ratio": entropy_ratio,
            }
        )
    return pd.DataFrame(rows, columns=COMPARISON_COLUMNS)


def write_comparison(root: Path) -> Path:
    """
    Build the comparison of every campaign under ``root`` and write ``comparison.csv``.

    Raises:
        FileNotFoundError: If ``root`` does not exist or holds no summaries.
    """
    summaries = collect_summaries(root)
    if not summaries:
        raise FileNotFoundError(f"no campaign summaries found under {root}")
    path = root / COMPARISON_FILE
    build_comparison(summaries).to_csv(
        path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g"
    )
    logger.info("Wrote comparison of %d campaigns to %s", len(summaries), path)
    return path
