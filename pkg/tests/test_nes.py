import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from config.config_manager import AgentConfig, NesConfig, ScoreTransform, TrainingConfig
from nes.run_log import RunLog
from nes.runner import MemberTask, run_nes, train_and_evaluate
from nes.strategy import sample_noises, transform_scores, update_se
from network.mlp import Activation
from synthetic.checkpoint import load_se
from synthetic.environment import build_se_spec
from training.trainer import StopCause
from utils.error_handler import DimensionError, NesError
from utils.logger import Logger
from utils.process_manager import ProcessManager
from verification.checks import micro_run_config


def first_param_score( task: MemberTask ) -> float:

    return float(task.spec.params[0])


def solved_score( task: MemberTask ) -> float:

    return 200.0


def flaky_score( task: MemberTask ) -> float:

    if task.index == 1:
        raise RuntimeError("member crashed")

    return float(task.index)


def nan_mean_score( task: MemberTask ) -> float:

    return float('nan') if task.index == 2 else float(task.index)


def fake_config( population_size: int = 4, outer_loops: int = 3, **nes ):

    config = micro_run_config()
    config.nes = NesConfig(step_size=0.5, std_dev=0.1, population_size=population_size, outer_loops=outer_loops, hp_variation=False, **nes)
    return config


# Noise sampling


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(1, 50), st.integers(0, 2 ** 32 - 1))
def test_mirrored_noise_is_exactly_antisymmetric( half, size, seed ):

    noises = sample_noises(NesConfig(population_size=2 * half), size, np.random.default_rng(seed))

    assert noises.shape == (2 * half, size)
    assert_array_equal(noises[half:], -noises[:half])
    assert np.all(noises[:half].sum(axis=0) + noises[half:].sum(axis=0) == 0)


def test_plain_noise_is_not_mirrored( rng ):

    noises = sample_noises(NesConfig(population_size=4, mirrored=False), 10, rng)

    assert not np.array_equal(noises[2:], -noises[:2])


def test_mirrored_noise_needs_an_even_population( rng ):

    with pytest.raises(NesError):
        sample_noises(NesConfig(population_size=5), 10, rng)


# Score transforms


@pytest.mark.parametrize("raw, expected", [

    ([3.0, 1.0], [1.0, 0.0]),
    ([5.0, 5.0, 5.0], [0.0, 0.0, 0.0]),
    ([0.0, 2.0, 4.0], [0.0, 0.0, 1.0]),
    ([1.0, 2.0, 3.0, 6.0], [0.0, 0.0, 0.0, 1.0]),
    ([10.0, 30.0, 20.0, 20.0], [0.0, 1.0, 0.0, 0.0])
])
def test_better_average_zeroes_members_at_or_below_the_mean( raw, expected ):

    assert_array_equal(transform_scores(raw, ScoreTransform.BETTER_AVERAGE), expected)


def test_better_average_scales_members_above_the_mean():

    # mean 2, max 5: (3 - 2) / (5 - 2) and (5 - 2) / (5 - 2)
    assert_allclose(transform_scores([0.0, 0.0, 3.0, 5.0]), [0.0, 0.0, 1.0 / 3.0, 1.0])


def test_rank_linear_maps_ranks_onto_the_unit_interval():

    assert_array_equal(transform_scores([30.0, 10.0, 20.0], ScoreTransform.RANK_LINEAR), [1.0, 0.0, 0.5])
    assert_array_equal(transform_scores([1.0, 1.0], ScoreTransform.RANK_LINEAR), [0.5, 0.5])


def test_raw_transform_is_min_max():

    assert_array_equal(transform_scores([2.0, 4.0, 6.0], ScoreTransform.RAW), [0.0, 0.5, 1.0])
    assert_array_equal(transform_scores([2.0, 2.0], ScoreTransform.RAW), [0.0, 0.0])


@settings(max_examples=50, deadline=None)
@given(

    st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=32),
    st.sampled_from(list(ScoreTransform))
)
def test_transforms_stay_in_the_unit_interval( raw, transform ):

    transformed = transform_scores(raw, transform)

    assert transformed.shape == (len(raw),)
    assert np.all((transformed >= 0.0) & (transformed <= 1.0))


def test_transform_rejects_degenerate_input():

    with pytest.raises(NesError):
        transform_scores([1.0])

    with pytest.raises(NesError):
        transform_scores([1.0, float('nan')])


# Update


def test_update_follows_the_weighted_noise_sum():

    e = np.array([1.0, -2.0, 0.5])
    config = NesConfig(step_size=1.0, std_dev=0.1, population_size=2)

    # 1 / (2 * 0.1) * (1 * e + 0 * -e)
    assert_allclose(update_se(np.zeros(3), np.stack([e, -e]), np.array([1.0, 0.0]), config), 5.0 * e, rtol=0, atol=1e-12)


def test_zero_scores_leave_psi_unchanged( rng ):

    psi = rng.standard_normal(6)
    noises = sample_noises(NesConfig(population_size=4), 6, rng)

    assert_array_equal(update_se(psi, noises, np.zeros(4), NesConfig(population_size=4)), psi)


def test_update_rejects_mismatched_shapes():

    with pytest.raises(DimensionError):
        update_se(np.zeros(3), np.zeros((2, 4)), np.zeros(2), NesConfig(population_size=2))

    with pytest.raises(DimensionError):
        update_se(np.zeros(3), np.zeros((2, 3)), np.zeros(3), NesConfig(population_size=2))


# Outer loop


def test_run_nes_writes_its_artifacts( tmp_path ):

    result = run_nes(fake_config(), run_seed=3, evaluator=first_param_score, run_dir=tmp_path)
    records = RunLog.read(tmp_path / "run_log.jsonl")

    assert len(result.reports) == 3
    assert [r['generation'] for r in records] == [0, 1, 2]
    assert all(len(r['scores']) == 4 for r in records)

    best = load_se(tmp_path / "best_se.json")
    final = load_se(tmp_path / "final_se.json")

    assert best.meta.eval_score == max(r.mean_eval for r in result.reports)
    assert_array_equal(final.params, result.final.params)
    assert final.meta.nes_iteration == 3


def test_run_nes_moves_psi_towards_better_members():

    config = fake_config(outer_loops=5)
    result = run_nes(config, run_seed=0, evaluator=first_param_score)

    first = result.reports[0].mean_eval
    last = result.reports[-1].mean_eval

    assert last > first


def test_run_nes_is_reproducible_from_the_seed():

    a = run_nes(fake_config(), run_seed=11, evaluator=first_param_score)
    b = run_nes(fake_config(), run_seed=11, evaluator=first_param_score)
    c = run_nes(fake_config(), run_seed=12, evaluator=first_param_score)

    assert_array_equal(a.final.params, b.final.params)
    assert not np.array_equal(a.final.params, c.final.params)


def test_thread_pool_matches_serial_execution():

    serial = run_nes(fake_config(), run_seed=5, evaluator=first_param_score)
    threaded = run_nes(fake_config(), run_seed=5, pool=ProcessManager(3, "thread"), evaluator=first_param_score)

    assert_array_equal(serial.final.params, threaded.final.params)


def test_failed_members_take_the_population_minimum():

    result = run_nes(fake_config(outer_loops=1, evaluate_mean=False), run_seed=0, evaluator=flaky_score, logger=Logger(quiet=True))
    report = result.reports[0]

    assert report.failed_members == [1]
    assert report.scores == [0.0, 0.0, 2.0, 3.0]
    assert report.mean_eval is None


def test_non_finite_scores_count_as_failures():

    report = run_nes(fake_config(outer_loops=1), run_seed=0, evaluator=nan_mean_score).reports[0]

    assert report.failed_members == [2]
    assert report.scores == [0.0, 1.0, 0.0, 3.0]
    assert report.mean_eval == 4.0


def test_solved_streak_stops_the_search_early():

    result = run_nes(fake_config(outer_loops=10, early_stop_patience=3), run_seed=0, evaluator=solved_score)

    assert result.early_stopped
    assert len(result.reports) == 3


def test_invalid_nes_config_is_rejected():

    with pytest.raises(NesError):
        run_nes(fake_config(population_size=3), run_seed=0, evaluator=first_param_score)


def test_micro_run_is_identical_across_worker_counts():

    config = micro_run_config()

    serial = run_nes(config, 1, ProcessManager(1))
    parallel = run_nes(config, 1, ProcessManager(4, "process"))

    assert_array_equal(serial.final.params, parallel.final.params)
    assert [r.scores for r in serial.reports] == [r.scores for r in parallel.reports]


def test_member_on_an_exploding_se_still_gets_a_score():

    config = micro_run_config()
    spec = build_se_spec(config.task, (16,), Activation.LEAKY_RELU, np.random.default_rng(3), run_seed=3)

    score, report = train_and_evaluate(spec.with_params(spec.params * 1e6), AgentConfig(initial_episodes=1, batch_size=8, hidden_size=8), TrainingConfig(max_episodes=5, test_episodes=2), np.random.default_rng(0))

    assert report.stop_cause is StopCause.DIVERGED
    assert 1.0 <= score <= 200.0


def test_serial_micro_run_completes():

    result = run_nes(micro_run_config(), 1, ProcessManager(1))

    assert len(result.reports) == 2
    assert all(np.all(np.isfinite(r.scores)) for r in result.reports)
    assert np.all(np.isfinite(result.final.params))
    assert result.final.meta.nes_iteration == 2
