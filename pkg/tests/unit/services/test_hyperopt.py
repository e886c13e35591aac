"""Unit tests for wmm_lab.services.hyperopt."""

import math

import numpy as np
import pandas as pd
import pytest
from scipy import stats

from wmm_lab.core.errors import ConfigurationError, InvalidArgumentError, NotEnoughTrialsError
from wmm_lab.models.experiment import ExperimentSpec, ModelSpec
from wmm_lab.models.search import CampaignMethod, SearchSpace, TrialRecord
from wmm_lab.models.training import TrainConfig
from wmm_lab.models.wmm import WmmMethod, WmmTarget
from wmm_lab.ops.rng import make_rng
from wmm_lab.repositories.trials import TrialRepository
from wmm_lab.services import hyperopt
from wmm_lab.services.hyperopt import (
    SCATTER_COLUMNS,
    export_scatter_csv,
    log_uniform,
    run_search,
    sample_config,
    top_k_summary,
)

ELIGIBLE = [WmmTarget(layer="dense1"), WmmTarget(layer="output")]


def _trial(index: int, metric: float | None, status: str = "ok", entropy: float | None = 4.0):
    return TrialRecord(
        trial=index,
        method=CampaignMethod.REINIT,
        p=0.1,
        c=0.1,
        p_times_c=0.01,
        target="dense1",
        seed=index,
        l2=0.0,
        val_metric=metric,
        test_metric=metric,
        entropy_bits=entropy,
        status=status,
    )


# ---------------------------------------------------------------------------
# log_uniform
# ---------------------------------------------------------------------------


class TestLogUniform:
    def test_draws_stay_in_closed_interval(self, rng):
        draws = [log_uniform(rng, 0.05, 0.4) for _ in range(10_000)]
        assert min(draws) >= 0.05
        assert max(draws) <= 0.4

    def test_median_is_geometric_mean(self, rng):
        draws = [log_uniform(rng, 0.05, 0.4) for _ in range(10_000)]
        assert np.median(draws) == pytest.approx(math.sqrt(0.05 * 0.4), rel=0.05)

    def test_log_of_draws_is_uniform(self, rng):
        low, high = math.log(0.03), math.log(0.35)
        logs = [math.log(log_uniform(rng, 0.03, 0.35)) for _ in range(10_000)]
        result = stats.kstest(logs, stats.uniform(loc=low, scale=high - low).cdf)
        assert result.pvalue > 0.01

    def test_collapsed_interval(self, rng):
        assert log_uniform(rng, 0.2, 0.2) == 0.2

    @pytest.mark.parametrize("low, high", [(0.0, 0.1), (0.3, 0.2), (-1.0, 0.5)])
    def test_bad_bounds_rejected(self, rng, low, high):
        with pytest.raises(InvalidArgumentError, match="0 < low <= high"):
            log_uniform(rng, low, high)


# ---------------------------------------------------------------------------
# sample_config
# ---------------------------------------------------------------------------


class TestSampleConfig:
    def test_wmm_campaign_sample(self):
        sample = sample_config(SearchSpace(method=CampaignMethod.SHUFFLE), make_rng(3), ELIGIBLE)
        assert sample.wmm is not None
        assert sample.wmm.method is WmmMethod.SHUFFLE
        assert sample.wmm.targets == [sample.target]
        assert 0.05 <= sample.p <= 0.4
        assert 0.03 <= sample.c <= 0.35
        assert 0 <= sample.seed < 2**64

    def test_methods_share_draws(self):
        draws = [
            sample_config(SearchSpace(method=method), make_rng(3), ELIGIBLE)
            for method in CampaignMethod
        ]
        assert len({(d.p, d.c, d.target, d.seed) for d in draws}) == 1

    def test_reference_campaign_draws_l2_from_grid(self):
        space = SearchSpace(method=CampaignMethod.NONE, l2_grid=[0.0, 1e-3])
        l2_values = {sample_config(space, make_rng(seed), ELIGIBLE).l2 for seed in range(50)}
        assert l2_values == {0.0, 1e-3}
        assert sample_config(space, make_rng(0), ELIGIBLE).wmm is None

    def test_explicit_targets_override_eligible(self):
        space = SearchSpace(method=CampaignMethod.REINIT, targets=["lstm1:forget"])
        sample = sample_config(space, make_rng(0), ELIGIBLE)
        assert str(sample.target) == "lstm1:forget"

    def test_no_eligible_target(self):
        with pytest.raises(ConfigurationError, match="no eligible"):
            sample_config(SearchSpace(method=CampaignMethod.REINIT), make_rng(0), [])

    def test_targets_drawn_uniformly(self):
        space = SearchSpace(method=CampaignMethod.REINIT)
        counts = {str(t): 0 for t in ELIGIBLE}
        for seed in range(2_000):
            counts[str(sample_config(space, make_rng(seed), ELIGIBLE).target)] += 1
        assert stats.chisquare(list(counts.values())).pvalue > 0.001


# ---------------------------------------------------------------------------
# top_k_summary
# ---------------------------------------------------------------------------


class TestTopKSummary:
    def test_mean_and_population_std(self):
        trials = [_trial(i, float(v)) for i, v in enumerate([5, 1, 4, 2, 3, 9])]
        trials.append(_trial(6, None, status="diverged"))
        summary = top_k_summary(trials, 5)
        assert summary.mean == pytest.approx(3.0)
        assert summary.std == pytest.approx(math.sqrt(2.0))
        assert summary.ok_trials == 6
        assert summary.best.trial == 1
        assert summary.mean_entropy_bits == pytest.approx(4.0)

    def test_k_one_is_the_best_trial(self):
        summary = top_k_summary([_trial(0, 0.5), _trial(1, 0.2)], 1)
        assert summary.mean == 0.2
        assert summary.std == 0.0

    def test_ties_broken_by_index(self):
        summary = top_k_summary([_trial(3, 0.1), _trial(1, 0.1), _trial(2, 0.1)], 1)
        assert summary.best.trial == 1

    def test_not_enough_successful_trials(self):
        trials = [_trial(0, 0.1), _trial(1, None, status="diverged")]
        with pytest.raises(NotEnoughTrialsError, match="only 1") as excinfo:
            top_k_summary(trials, 2)
        assert excinfo.value.count == 1

    def test_validation_metric_ranking(self):
        trials = [_trial(0, 0.3), _trial(1, 0.1)]
        assert top_k_summary(trials, 1, metric="val_metric").best.trial == 1

    @pytest.mark.parametrize("k, trials", [(0, [_trial(0, 0.1)]), (1, [])])
    def test_bad_arguments(self, k, trials):
        with pytest.raises(InvalidArgumentError):
            top_k_summary(trials, k)


class TestExportScatterCsv:
    def test_columns_and_rows(self, tmp_path):
        path = tmp_path / "scatter.csv"
        export_scatter_csv([_trial(0, 0.25), _trial(1, None, status="diverged")], path)
        frame = pd.read_csv(path)
        assert list(frame.columns) == SCATTER_COLUMNS
        assert frame["status"].tolist() == ["ok", "diverged"]
        assert frame["test_metric"].isna().tolist() == [False, True]


# ---------------------------------------------------------------------------
# run_search
# ---------------------------------------------------------------------------


@pytest.fixture
def search_spec(tiny_spec):
    return tiny_spec.model_copy(update={"search": SearchSpace(method=CampaignMethod.REINIT)})


class TestRunSearch:
    def test_same_master_seed_same_trials(self, search_spec):
        a = run_search(search_spec, 2, master_seed=17, workers=1)
        b = run_search(search_spec, 2, master_seed=17, workers=2)
        assert a == b
        assert [trial.trial for trial in a] == [0, 1]
        assert all(trial.status == "ok" for trial in a)

    def test_resume_runs_only_missing_trials(self, search_spec, tmp_path, mocker):
        fresh = run_search(search_spec, 3, master_seed=17, workers=1)

        repository = TrialRepository(tmp_path / "trials.jsonl")
        run_search(search_spec, 2, master_seed=17, repository=repository, workers=1)
        spy = mocker.spy(hyperopt, "run_trial")
        resumed = run_search(search_spec, 3, master_seed=17, repository=repository, workers=1)

        assert [call.args[4] for call in spy.call_args_list] == [2]
        assert resumed == fresh
        assert repository.completed_indices() == {0, 1, 2}

    def test_reference_campaign_records_no_wmm_fields(self, tiny_spec):
        spec = tiny_spec.model_copy(update={"search": SearchSpace(method=CampaignMethod.NONE)})
        (trial,) = run_search(spec, 1, master_seed=3, workers=1)
        assert trial.p is None
        assert trial.target is None
        assert trial.l2 in (0.0, 1e-5, 1e-4, 1e-3)
        assert trial.entropy_bits is not None

    def test_bad_target_fails_before_any_trial(self, tiny_spec, tmp_path):
        space = SearchSpace(method=CampaignMethod.SHUFFLE, targets=["lstm9"])
        spec = tiny_spec.model_copy(update={"search": space})
        repository = TrialRepository(tmp_path / "trials.jsonl")
        with pytest.raises(ConfigurationError, match="lstm9"):
            run_search(spec, 2, master_seed=1, repository=repository)
        assert not repository.path.exists()

    def test_missing_search_section(self, tiny_spec):
        with pytest.raises(ConfigurationError, match="no search section"):
            run_search(tiny_spec, 1, master_seed=1)

    def test_zero_budget(self, search_spec):
        with pytest.raises(InvalidArgumentError, match="budget"):
            run_search(search_spec, 0, master_seed=1)

    @pytest.mark.slow
    def test_budget_thirty_is_stable_on_noiseless_synthetic(self, tmp_path):
        spec = ExperimentSpec(
            model=ModelSpec(hidden=[32]),
            train=TrainConfig(epochs=5, batch_size=32, learning_rate=1e-3),
            search=SearchSpace(method=CampaignMethod.REINIT),
            output_dir=tmp_path,
        )
        trials = run_search(spec, 30, master_seed=0)
        assert len(trials) == 30
        assert sum(trial.status == "ok" for trial in trials) >= 27
