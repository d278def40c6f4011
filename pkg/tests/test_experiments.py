import json

import numpy as np
import pandas as pd
import pytest
from scipy.stats import kstest, loguniform

from config.config_manager import AgentKind, HpVariationConfig, TrainingConfig
from envs.types import CARTPOLE
from experiments.export import EVALS_COLUMNS, EVALS_SCHEMA_VERSION, RETURNS_COLUMNS, baseline_mean_steps, evals_frame, returns_frame, write_results
from experiments.histograms import HISTOGRAM_COLUMNS, dimension_names, histogram_frame, suite_histograms
from experiments.hp_sampler import HpSampler
from experiments.suites import REAL_ENV_ID, AgentJob, EvalRecord, record_seed, run_agent_job, suite_baseline, suite_robustness, suite_transfer, summarize
from network.mlp import Activation
from synthetic.environment import build_se_spec
from utils.error_handler import ExperimentError
from utils.process_manager import ProcessManager


def make_record( se_id="se_00", index=0, returns=(200.0, 200.0), steps=100 ) -> EvalRecord:

    return EvalRecord(

        se_id=se_id,
        agent_index=index,
        agent_kind="ddqn",
        learning_rate=0.001,
        batch_size=128,
        hidden_size=128,
        hidden_layers=2,
        returns=list(returns),
        episodes=5,
        steps=steps,
        eval_steps=40
    )


@pytest.fixture
def se_set():

    spec = build_se_spec(CARTPOLE, (16,), Activation.LEAKY_RELU, np.random.default_rng(3), run_seed=3)
    return [("se_00", spec.with_params(spec.params, eval_score=200.0))]


@pytest.fixture
def training():

    return TrainingConfig(max_episodes=3, test_episodes=2)


# HP sampling


def test_learning_rate_is_log_uniform():

    ranges = HpVariationConfig()
    sampler = HpSampler(ranges)
    rng = np.random.default_rng(0)

    samples = np.array([sampler.sample_learning_rate(rng) for _ in range(10_000)])
    low, high = ranges.learning_rate

    assert samples.min() >= low and samples.max() <= high
    assert kstest(samples, loguniform(low, high).cdf).pvalue > 0.01


def test_sampled_hps_stay_inside_their_ranges():

    ranges = HpVariationConfig()
    sampler = HpSampler(ranges)
    rng = np.random.default_rng(1)

    for _ in range(200):

        hps = sampler.sample(rng)

        assert ranges.batch_size[0] <= hps['batch_size'] <= ranges.batch_size[1]
        assert ranges.hidden_size[0] <= hps['hidden_size'] <= ranges.hidden_size[1]
        assert ranges.hidden_layers[0] <= hps['hidden_layers'] <= ranges.hidden_layers[1]


def test_degenerate_range_returns_its_bound( tiny_agent_config ):

    ranges = HpVariationConfig(learning_rate=(0.002, 0.002), batch_size=(64, 64), hidden_size=(32, 32), hidden_layers=(2, 2))
    config = HpSampler(ranges).apply(tiny_agent_config(), np.random.default_rng(0))

    assert (config.learning_rate, config.batch_size, config.hidden_size, config.hidden_layers) == (0.002, 64, 32, 2)
    assert config.agent_kind is AgentKind.DDQN


# Summaries and export


def test_summarize_pools_returns_and_compares_against_baseline():

    records = [make_record(returns=(200.0, 200.0), steps=100), make_record(index=1, returns=(100.0, 120.0), steps=50)]
    summary = summarize(records, CARTPOLE, baseline_mean_steps=200.0)

    assert summary['n_records'] == 2
    assert summary['n_returns'] == 4
    assert summary['mean_return'] == pytest.approx(155.0)
    assert summary['solved_fraction'] == pytest.approx(0.5)
    assert summary['mean_train_steps'] == pytest.approx(75.0)
    assert summary['train_step_ratio'] == pytest.approx(0.375)
    assert summary['train_step_reduction'] == pytest.approx(0.625)


def test_summarize_without_baseline_has_no_ratio():

    summary = summarize([make_record()], CARTPOLE)

    assert 'train_step_ratio' not in summary


def test_summarize_rejects_empty_records():

    with pytest.raises(ExperimentError):
        summarize([], CARTPOLE)


def test_frames_have_fixed_headers():

    records = [make_record(), make_record(index=1, returns=(10.0, 20.0, 30.0))]

    assert list(evals_frame(records).columns) == EVALS_COLUMNS
    assert list(returns_frame(records).columns) == RETURNS_COLUMNS
    assert len(returns_frame(records)) == 5
    assert EVALS_COLUMNS == ['se_id', 'agent_kind', 'lr', 'batch', 'hidden', 'layers', 'mean_return', 'std_return', 'episodes', 'steps', 'eval_steps', 'schema_version']
    assert set(evals_frame(records)['schema_version']) == {EVALS_SCHEMA_VERSION}


def test_written_results_feed_the_baseline_ratio( tmp_path ):

    records = [make_record(steps=100), make_record(index=1, steps=300)]
    paths = write_results(records, summarize(records, CARTPOLE), tmp_path)

    assert [path.name for path in paths] == ["evals.csv", "returns.csv", "summary.json"]
    assert list(pd.read_csv(tmp_path / "evals.csv").columns) == EVALS_COLUMNS
    assert json.loads((tmp_path / "summary.json").read_text())['schema_version'] == 1
    assert baseline_mean_steps(tmp_path) == pytest.approx(200.0)


def test_baseline_steps_need_a_matching_evals_file( tmp_path ):

    with pytest.raises(ExperimentError):
        baseline_mean_steps(tmp_path)

    pd.DataFrame({'steps': [1, 2]}).to_csv(tmp_path / "evals.csv", index=False)

    with pytest.raises(ExperimentError):
        baseline_mean_steps(tmp_path)


def test_baseline_from_another_schema_version_is_rejected( tmp_path ):

    records = [make_record(steps=100)]
    write_results(records, summarize(records, CARTPOLE), tmp_path)

    frame = pd.read_csv(tmp_path / "evals.csv")
    frame['schema_version'] = EVALS_SCHEMA_VERSION + 1
    frame.to_csv(tmp_path / "evals.csv", index=False)

    with pytest.raises(ExperimentError, match="schema version"):
        baseline_mean_steps(tmp_path)


def test_baseline_without_a_schema_column_is_rejected( tmp_path ):

    records = [make_record(steps=100)]
    evals_frame(records).drop(columns='schema_version').to_csv(tmp_path / "evals.csv", index=False)

    with pytest.raises(ExperimentError, match="columns"):
        baseline_mean_steps(tmp_path)


# Suites


def test_record_seed_depends_on_every_part():

    base = record_seed(1, "se_00", 0)

    assert record_seed(1, "se_00", 0) == base
    assert len({base, record_seed(2, "se_00", 0), record_seed(1, "se_01", 0), record_seed(1, "se_00", 1)}) == 4


def test_agent_job_is_reproducible( se_set, tiny_agent_config, training ):

    se_id, spec = se_set[0]
    job = AgentJob(se_id=se_id, agent_index=0, task=CARTPOLE, agent=tiny_agent_config(), training=training, seed=record_seed(1, se_id, 0), spec=spec)

    first = run_agent_job(job)
    second = run_agent_job(job)

    assert first.returns == second.returns
    assert first.steps == second.steps
    assert len(first.returns) == training.test_episodes


def test_robustness_serial_and_threaded_agree( se_set, tiny_agent_config, training ):

    hp_ranges = HpVariationConfig(batch_size=(8, 16), hidden_size=(8, 16), hidden_layers=(1, 1))

    serial = suite_robustness(se_set, tiny_agent_config(), training, 3, 1, ProcessManager(1), hp_variation=hp_ranges)
    threaded = suite_robustness(se_set, tiny_agent_config(), training, 3, 1, ProcessManager(3, "thread"), hp_variation=hp_ranges)

    assert [r.agent_index for r in serial] == [0, 1, 2]
    assert [(r.returns, r.steps, r.learning_rate) for r in serial] == [(r.returns, r.steps, r.learning_rate) for r in threaded]
    assert all(hp_ranges.batch_size[0] <= r.batch_size <= hp_ranges.batch_size[1] for r in serial)


def test_unsolved_ses_are_filtered( se_set, tiny_agent_config, training ):

    _, spec = se_set[0]
    unsolved = ("se_01", spec.with_params(spec.params, eval_score=20.0))

    records = suite_robustness(se_set + [unsolved], tiny_agent_config(), training, 1, 1, ProcessManager(1))

    assert {record.se_id for record in records} == {"se_00"}

    with pytest.raises(ExperimentError):
        suite_robustness([unsolved], tiny_agent_config(), training, 1, 1, ProcessManager(1))

    kept = suite_robustness([unsolved], tiny_agent_config(), training, 1, 1, ProcessManager(1), require_solved=False)
    assert [record.se_id for record in kept] == ["se_01"]


def test_transfer_rejects_the_ddqn_target( se_set, tiny_agent_config, training ):

    with pytest.raises(ExperimentError):
        suite_transfer(se_set, tiny_agent_config(AgentKind.DDQN), training, 1, 1, ProcessManager(1))


def test_transfer_trains_the_target_kind( se_set, tiny_agent_config, training ):

    records = suite_transfer(se_set, tiny_agent_config(AgentKind.DUELING_DDQN), training, 2, 1, ProcessManager(1))

    assert [record.agent_kind for record in records] == ["dueling_ddqn", "dueling_ddqn"]


def test_baseline_trains_on_the_real_task( tiny_agent_config, training ):

    records = suite_baseline(CARTPOLE, tiny_agent_config(), training, 2, 1, ProcessManager(2, "thread"))

    assert [record.se_id for record in records] == [REAL_ENV_ID, REAL_ENV_ID]
    assert all(record.steps > 0 for record in records)


# Histograms


def test_dimension_names_end_with_reward():

    assert dimension_names(4) == ["state_0", "state_1", "state_2", "state_3", "reward"]


def test_histogram_bins_span_the_pooled_range():

    rng = np.random.default_rng(0)
    blue = rng.normal(0.0, 1.0, 500)
    green = rng.normal(2.0, 1.0, 300)
    orange = np.ones(300)

    frame = histogram_frame(blue, orange, green, 20)

    assert list(frame.columns) == HISTOGRAM_COLUMNS
    assert len(frame) == 20
    assert frame['bin_left'].iloc[0] == pytest.approx(min(blue.min(), green.min()))
    assert frame['bin_right'].iloc[-1] == pytest.approx(max(blue.max(), green.max()))
    assert frame['count_blue'].sum() == 500
    assert np.count_nonzero(frame['count_orange']) == 1


def test_histogram_drops_non_finite_samples():

    frame = histogram_frame(np.array([0.0, np.nan, 1.0]), np.array([np.inf, 0.5]), np.array([0.25]), 4)

    assert frame['count_blue'].sum() == 2
    assert frame['count_orange'].sum() == 1

    with pytest.raises(ExperimentError):
        histogram_frame(np.array([np.nan]), np.array([]), np.array([]), 4)


def test_histogram_suite_writes_one_file_per_dimension( se_set, tiny_agent_config, training, tmp_path ):

    _, spec = se_set[0]
    summary = suite_histograms(spec, tiny_agent_config(), training, 2, 10, 1, tmp_path, ProcessManager(2, "thread"))

    for name in dimension_names(CARTPOLE.obs_dim):

        assert (tmp_path / f"hist_cartpole_{name}.csv").exists()
        assert (tmp_path / f"hist_cartpole_{name}.svg").exists()

    counts = summary['tuple_counts']
    assert counts['green'] == counts['orange'] > 0
    assert summary['dimensions']['reward']['occupied_bins']['orange'] == 1
    assert json.loads((tmp_path / "hist_cartpole_summary.json").read_text())['bins'] == 10
