"""``search``: a hyper-parameter campaign with trial table, summary and scatter CSV."""

import argparse
from pathlib import Path

from wmm_lab.core.constants import TOP_K
from wmm_lab.core.errors import ConfigurationError, TrainingDivergedError
from wmm_lab.core.logging import logger
from wmm_lab.models.experiment import ExperimentSpec
from wmm_lab.repositories.trials import TrialRepository
from wmm_lab.services.hyperopt import export_scatter_csv, run_search, top_k_summary
from wmm_lab.services.reporting import SUMMARY_FILE

TRIALS_FILE = "trials.jsonl"
SCATTER_FILE = "scatter.csv"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("search", help="run a random-search campaign")
    parser.add_argument(
        "--spec", type=Path, required=True, help="experiment spec with a search section"
    )
    parser.add_argument("--budget", type=int, default=30, help="number of trials (default 30)")
    parser.add_argument("--seed", type=int, help="campaign master seed (default: train.seed)")
    parser.add_argument(
        "--out", type=Path, help="campaign directory (default: <output_dir>/<method>)"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    spec = ExperimentSpec.from_file(args.spec)
    if spec.search is None:
        raise ConfigurationError(f"{args.spec}: 'search' section is required by the search command")
    master_seed = spec.train.seed if args.seed is None else args.seed
    out = args.out or spec.output_dir / spec.search.method.value

    trials = run_search(spec, args.budget, master_seed, TrialRepository(out / TRIALS_FILE))
    export_scatter_csv(trials, out / SCATTER_FILE)

    ok = sum(trial.status == "ok" for trial in trials)
    if ok == 0:
        raise TrainingDivergedError(f"all {len(trials)} trials diverged")
    k = min(TOP_K, ok)
    if k < TOP_K:
        logger.warning(
            "Only %d successful trials; summarizing top-%d instead of top-%d", ok, k, TOP_K
        )
    summary = top_k_summary(trials, k)
    (out / SUMMARY_FILE).write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(
        "Campaign %s: top-%d mean %s = %.6g (std %.3g), best %.6g",
        summary.method.value,
        k,
        summary.metric,
        summary.mean,
        summary.std,
        summary.best.test_metric,
    )
    return 0
