"""Compare WMM campaigns against the L2 reference on the noisy synthetic task.

Runs a reference, a reinitialization and a shuffling campaign for each of three
master seeds on the 5,500/500/1,000 noisy synthetic dataset, then checks that the
best WMM top-5 mean test MSE stays within 5% of the best reference run.

    uv run python scripts/compare_noisy_synthetic.py --out output/noisy --budget 30
"""

import argparse
from pathlib import Path

from wmm_lab.core.constants import TOP_K
from wmm_lab.models.experiment import ExperimentSpec, TaskKind
from wmm_lab.models.search import CampaignMethod, SearchSpace
from wmm_lab.models.training import TrainConfig
from wmm_lab.repositories.trials import TrialRepository
from wmm_lab.services.hyperopt import run_search, top_k_summary

MASTER_SEEDS = (0, 1, 2)
PARITY_TOLERANCE = 1.05


def campaign_spec(method: CampaignMethod) -> ExperimentSpec:
    return ExperimentSpec(
        task=TaskKind.SYNTHETIC_NOISE,
        train=TrainConfig(epochs=20, batch_size=32, learning_rate=1e-3),
        search=SearchSpace(method=method),
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("output/noisy-synthetic"))
    parser.add_argument("--budget", type=int, default=30)
    args = parser.parse_args()

    for seed in MASTER_SEEDS:
        headline: dict[CampaignMethod, float] = {}
        for method in CampaignMethod:
            directory = args.out / f"seed{seed}" / method.value
            repository = TrialRepository(directory / "trials.jsonl")
            trials = run_search(campaign_spec(method), args.budget, seed, repository)
            ok = sum(trial.status == "ok" for trial in trials)
            summary = top_k_summary(trials, min(TOP_K, ok))
            headline[method] = (
                summary.best.test_metric if method is CampaignMethod.NONE else summary.mean
            )

        reference = headline.pop(CampaignMethod.NONE)
        best_method, best_wmm = min(headline.items(), key=lambda item: item[1])
        ratio = best_wmm / reference
        verdict = "ok" if ratio <= PARITY_TOLERANCE else "FAIL"
        print(
            f"seed {seed}: reference {reference:.6g}, best WMM ({best_method.value}) "
            f"{best_wmm:.6g}, ratio {ratio:.3f} [{verdict}]"
        )


if __name__ == "__main__":
    main()
