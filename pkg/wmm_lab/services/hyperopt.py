"""
Log-uniform random search over WMM hyper-parameters.

Every trial is seeded by (master seed, trial index) alone, so a campaign can run
its trials in any order, in parallel, or across an interruption and still produce
the same trial table. Finished trials are flushed to the repository in index order
by a single collector.

Functions:
    log_uniform:        One draw from a closed log-uniform interval.
    sample_config:      WMM settings, training seed and L2 coefficient of one trial.
    run_trial:          Train one trial and summarize it as a TrialRecord.
    run_search:         Execute (or resume) a campaign.
    top_k_summary:      Mean and population std over the k best successful trials.
    export_scatter_csv: Trial table as CSV for p*c scatter plots.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Literal, NamedTuple

import numpy as np
import pandas as pd

from wmm_lab.core.errors import ConfigurationError, InvalidArgumentError, NotEnoughTrialsError
from wmm_lab.core.logging import logger
from wmm_lab.core.settings import settings
from wmm_lab.models.experiment import ExperimentSpec
from wmm_lab.models.search import CampaignMethod, SearchSpace, TopKSummary, TrialRecord
from wmm_lab.models.wmm import WmmConfig, WmmMethod, WmmTarget
from wmm_lab.ops.rng import RngState, derive_seed, make_rng
from wmm_lab.repositories.trials import TrialRepository
from wmm_lab.services.experiments import (
    PreparedTask,
    build_network,
    effective_config,
    load_task,
    run_experiment,
)

type TrialMetric = Literal["test_metric", "val_metric"]

SCATTER_COLUMNS = [
    "trial",
    "method",
    "p",
    "c",
    "p_times_c",
    "target",
    "seed",
    "val_metric",
    "test_metric",
    "status",
]


class TrialSample(NamedTuple):
    wmm: WmmConfig | None
    seed: int
    l2: float
    p: float
    c: float
    target: WmmTarget


def log_uniform(rng: RngState, low: float, high: float) -> float:
    """exp(U[ln low, ln high]), clipped into [low, high]; a collapsed interval returns ``low``."""
    if not 0 < low <= high:
        raise InvalidArgumentError(
            f"log-uniform bounds must satisfy 0 < low <= high, got ({low}, {high})"
        )
    if low == high:
        return low
    value = math.exp(rng.uniform(math.log(low), math.log(high)))
    return min(max(value, low), high)


def sample_config(
    space: SearchSpace, rng: RngState, eligible: list[WmmTarget] | None = None
) -> TrialSample:
    """
    Draw p, c, one target uniformly from the eligible targets, and the training seed.

    The draws are identical for every method, so campaigns with the same master seed
    differ only in method-dependent fields. Reference campaigns (method ``none``)
    return no WMM config and additionally draw L2 uniformly from ``space.l2_grid``.

    Raises:
        ConfigurationError: If no target is eligible.
    """
    targets = space.targets if space.targets is not None else eligible
    if not targets:
        raise ConfigurationError("search space has no eligible WMM targets")

    p = log_uniform(rng, *space.p_range)
    c = log_uniform(rng, *space.c_range)
    target = targets[int(rng.integers(len(targets)))]
    seed = int(rng.integers(0, 2**64, dtype=np.uint64))

    if space.method is CampaignMethod.NONE:
        l2 = space.l2_grid[int(rng.integers(len(space.l2_grid)))]
        return TrialSample(None, seed, l2, p, c, target)

    wmm = WmmConfig(
        method=WmmMethod(space.method.value),
        p=p,
        c=c,
        targets=[target],
        shuffle_density=space.shuffle_density,
    )
    return TrialSample(wmm, seed, space.l2, p, c, target)


def run_trial(
    spec: ExperimentSpec,
    task: PreparedTask,
    eligible: list[WmmTarget],
    master_seed: int,
    index: int,
) -> TrialRecord:
    """Train trial ``index`` of the campaign described by ``spec.search``."""
    space = spec.search
    if space is None:
        raise ConfigurationError("experiment spec has no search section")
    sample = sample_config(space, make_rng(derive_seed(master_seed, index)), eligible)
    cfg = effective_config(spec).model_copy(
        update={"seed": sample.seed, "wmm": sample.wmm, "l2": sample.l2}
    )
    report = run_experiment(spec, task, cfg)
    entropy = report.timeline.totals()[report.timeline.last_epoch] if report.timeline.rows else None

    wmm = sample.wmm is not None
    return TrialRecord(
        trial=index,
        method=space.method,
        p=sample.p if wmm else None,
        c=sample.c if wmm else None,
        p_times_c=sample.p * sample.c if wmm else None,
        target=str(sample.target) if wmm else None,
        seed=sample.seed,
        l2=sample.l2,
        val_metric=report.val_metric,
        test_metric=report.test_metric,
        entropy_bits=entropy,
        status=report.status,
    )


def run_search(
    spec: ExperimentSpec,
    budget: int,
    master_seed: int,
    repository: TrialRepository | None = None,
    workers: int | None = None,
) -> list[TrialRecord]:
    """
    Run trials ``0 .. budget-1``, skipping those already stored in ``repository``.

    Data loading and target resolution happen before any trial, so a broken spec
    aborts the campaign without side effects. Diverged trials are recorded, not retried.

    Args:
        spec: Experiment with a ``search`` section.
        budget: Number of trials.
        master_seed: Campaign seed; trial i is seeded by (master_seed, i).
        repository: Incremental JSON-lines store enabling resume.
        workers: Worker-pool size, ``WMM_LAB_THREADS`` by default.

    Returns:
        All trials ``0 .. budget-1`` ordered by index.

    Raises:
        InvalidArgumentError: If ``budget`` < 1.
        ConfigurationError: If the spec has no search section or its targets do not resolve.
    """
    if budget < 1:
        raise InvalidArgumentError(f"budget must be >= 1, got {budget}")
    space = spec.search
    if space is None:
        raise ConfigurationError("experiment spec has no search section")

    task = load_task(spec)
    probe = build_network(spec, task, master_seed)
    eligible = probe.eligible_targets()
    probe.resolve_targets(space.targets if space.targets is not None else eligible)
    if spec.tracked is None:
        spec = spec.model_copy(update={"tracked": probe.all_layers()})

    stored = {record.trial: record for record in repository.find_all()} if repository else {}
    pending = [index for index in range(budget) if index not in stored]
    if stored:
        logger.info(
            "Resuming campaign: %d of %d trials already stored", budget - len(pending), budget
        )

    workers = workers or settings.compute.threads
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            index: pool.submit(run_trial, spec, task, eligible, master_seed, index)
            for index in pending
        }
        for index in pending:
            record = futures[index].result()
            if repository is not None:
                repository.append(record)
            stored[index] = record

    trials = [stored[index] for index in range(budget)]
    ok = sum(record.status == "ok" for record in trials)
    logger.info("Campaign %s finished: %d/%d trials ok", space.method.value, ok, budget)
    return trials


def top_k_summary(
    trials: list[TrialRecord], k: int, metric: TrialMetric = "test_metric"
) -> TopKSummary:
    """
    Summarize the ``k`` successful trials with the lowest ``metric``.

    Ties are broken by trial index. ``best`` is the single lowest trial, the
    convention used for reference campaigns.

    Raises:
        InvalidArgumentError: If ``k`` < 1 or ``trials`` is empty.
        NotEnoughTrialsError: If fewer than ``k`` trials finished with status ok.
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    if not trials:
        raise InvalidArgumentError("no trials to summarize")
    ok = [trial for trial in trials if trial.status == "ok"]
    if len(ok) < k:
        raise NotEnoughTrialsError(
            f"top-{k} summary needs {k} successful trials, only {len(ok)} available", count=len(ok)
        )

    ranked = sorted(ok, key=lambda trial: (getattr(trial, metric), trial.trial))[:k]
    values = np.array([getattr(trial, metric) for trial in ranked], dtype=np.float64)
    entropies = [trial.entropy_bits for trial in ranked if trial.entropy_bits is not None]
    return TopKSummary(
        method=ranked[0].method,
        metric=metric,
        k=k,
        ok_trials=len(ok),
        mean=float(values.mean()),
        std=float(values.std()),
        best=ranked[0],
        mean_entropy_bits=float(np.mean(entropies)) if entropies else None,
    )


def export_scatter_csv(trials: list[TrialRecord], path: Path) -> None:
    """Write ``trial,method,p,c,p_times_c,target,seed,val_metric,test_metric,status`` rows."""
    frame = pd.DataFrame(
        [trial.model_dump(mode="json", include=set(SCATTER_COLUMNS)) for trial in trials],
        columns=SCATTER_COLUMNS,
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format="%.17g")
