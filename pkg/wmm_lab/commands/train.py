"""``train``: one seeded training run, written as a report JSON and an entropy CSV."""

import argparse
from pathlib import Path

from wmm_lab.core.errors import TrainingDivergedError
from wmm_lab.core.logging import logger
from wmm_lab.models.experiment import ExperimentSpec
from wmm_lab.services.experiments import effective_config, run_experiment

REPORT_FILE = "report.json"
ENTROPY_FILE = "entropy.csv"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("train", help="run one seeded training run")
    parser.add_argument("--spec", type=Path, required=True, help="experiment spec (JSON)")
    parser.add_argument("--seed", type=int, help="master seed overriding train.seed")
    parser.add_argument("--out", type=Path, help="output directory (default: spec output_dir)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    spec = ExperimentSpec.from_file(args.spec)
    if args.seed is not None:
        spec = ExperimentSpec.model_validate(
            spec.model_dump() | {"train": spec.train.model_dump() | {"seed": args.seed}}
        )

    report = run_experiment(spec, cfg=effective_config(spec))

    out = args.out or spec.output_dir
    out.mkdir(parents=True, exist_ok=True)
    (out / REPORT_FILE).write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    report.timeline.to_csv(out / ENTROPY_FILE)
    logger.info("Wrote %s and %s to %s", REPORT_FILE, ENTROPY_FILE, out)

    if report.status == "diverged":
        raise TrainingDivergedError(
            f"training diverged (spec {args.spec}, seed {report.config.seed})"
        )
    return 0
