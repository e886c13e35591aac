"""``gen-data``: write a synthetic dataset CSV and its JSON sidecar."""

import argparse
from pathlib import Path

from wmm_lab.core.constants import DESK_SCALE
from wmm_lab.core.logging import logger
from wmm_lab.data.windows import save_dataset
from wmm_lab.models.experiment import ExperimentSpec, TaskKind
from wmm_lab.services.experiments import generate_dataset

DATASET_FILE = "dataset.csv"


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gen-data", help="generate a synthetic dataset")
    parser.add_argument(
        "--spec", type=Path, help="experiment spec supplying task and noise settings"
    )
    parser.add_argument(
        "--task",
        choices=[TaskKind.SYNTHETIC.value, TaskKind.SYNTHETIC_NOISE.value],
        help="dataset family (default: from --spec, else synthetic)",
    )
    parser.add_argument("--scale", type=float, help=f"split scale factor (default {DESK_SCALE})")
    parser.add_argument("--seed", type=int, help="data seed (default: from --spec, else 0)")
    parser.add_argument("--out", type=Path, help="output directory (default: spec output_dir)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    spec = ExperimentSpec.from_file(args.spec) if args.spec else ExperimentSpec()
    updates = {
        key: value
        for key, value in (("task", args.task), ("scale", args.scale), ("data_seed", args.seed))
        if value is not None
    }
    spec = ExperimentSpec.model_validate(spec.model_dump() | updates)

    splits, sidecar = generate_dataset(
        spec.task,
        spec.scale,
        spec.data_seed,
        spec.snr_db,
        spec.noise_exponent,
        spec.windows_per_series,
    )
    out = args.out or spec.output_dir
    path = out / DATASET_FILE
    save_dataset(splits, path, sidecar)
    logger.info("Dataset %s: %s windows", path, "/".join(str(len(split)) for split in splits))
    return 0
