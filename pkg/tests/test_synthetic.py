import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_array_equal

from envs.types import ACROBOT, CARTPOLE, DoneCause
from network.mlp import Activation
from synthetic.checkpoint import load_se, save_se
from synthetic.environment import SyntheticEnvironment, build_se_spec, one_hot, se_episode, se_step
from utils.error_handler import CheckpointError, CheckpointSchemaError, ConfigurationError, DimensionError, EpisodeDoneError, NumericalError, TaskMismatchError


@pytest.fixture
def cartpole_se():

    return build_se_spec(CARTPOLE, (16,), Activation.LEAKY_RELU, np.random.default_rng(0), run_seed=0)


class FirstActionPolicy:

    def select_action( self, state, explore ):

        return 0, None


def test_se_dimensions_follow_the_task():

    spec = build_se_spec(ACROBOT, (167,), Activation.PRELU, np.random.default_rng(0))

    assert spec.arch.input_dim == 6 + 3
    assert spec.arch.output_dim == 6 + 1
    assert spec.params.shape == (spec.arch.param_count,)


def test_spec_params_are_read_only( cartpole_se ):

    with pytest.raises(ValueError):
        cartpole_se.params[0] = 1.0


def test_spec_rejects_non_finite_params( cartpole_se ):

    params = np.array(cartpole_se.params)
    params[3] = np.nan

    with pytest.raises(NumericalError):
        cartpole_se.with_params(params)


def test_with_params_updates_meta_only_where_asked( cartpole_se ):

    moved = cartpole_se.with_params(cartpole_se.params + 1.0, nes_iteration=4)

    assert moved.meta.nes_iteration == 4
    assert moved.meta.run_seed == 0
    assert cartpole_se.meta.nes_iteration == 0


def test_one_hot_rejects_out_of_range_actions():

    assert_array_equal(one_hot(1, 3), [0.0, 1.0, 0.0])

    with pytest.raises(DimensionError):
        one_hot(3, 3)


def test_se_step_splits_state_and_reward( cartpole_se ):

    next_state, reward = se_step(cartpole_se, np.zeros(4), 1)

    assert next_state.shape == (4,)
    assert isinstance(reward, float)


def test_se_step_rejects_wrong_state_shape( cartpole_se ):

    with pytest.raises(DimensionError):
        se_step(cartpole_se, np.zeros(5), 0)


@settings(max_examples=30, deadline=None)
@given(

    st.lists(st.floats(-5, 5), min_size=4, max_size=4),
    st.integers(0, 1)
)
def test_se_step_is_a_pure_function( state, action ):

    spec = build_se_spec(CARTPOLE, (8,), Activation.TANH, np.random.default_rng(1))
    state = np.array(state)

    first = se_step(spec, state, action)
    second = se_step(spec, state.copy(), action)

    assert_array_equal(first[0], second[0])
    assert first[1] == second[1]


def test_synthetic_episodes_run_the_full_task_length( cartpole_se ):

    transitions = se_episode(cartpole_se, FirstActionPolicy(), CARTPOLE.max_episode_length, np.random.default_rng(0))

    assert len(transitions) == 200
    assert not any(t.terminal for t in transitions)


def test_se_episode_only_runs_the_task_length( cartpole_se ):

    with pytest.raises(ConfigurationError):
        se_episode(cartpole_se, FirstActionPolicy(), 50, np.random.default_rng(0))


def test_synthetic_environment_ends_with_a_time_limit( cartpole_se ):

    env = SyntheticEnvironment(cartpole_se, np.random.default_rng(0), max_steps=3)
    env.reset()
    results = [env.step(0) for _ in range(3)]

    assert [r.done for r in results] == [False, False, True]
    assert results[-1].done_cause is DoneCause.TIME_LIMIT

    with pytest.raises(EpisodeDoneError):
        env.step(0)


def test_checkpoint_round_trip_is_bit_exact( cartpole_se, tmp_path ):

    spec = cartpole_se.with_params(cartpole_se.params * np.pi, eval_score=197.5, nes_iteration=12)
    loaded = load_se(save_se(spec, tmp_path / "se.json"), CARTPOLE)

    assert_array_equal(loaded.params, spec.params)
    assert loaded.arch == spec.arch
    assert loaded.meta.eval_score == 197.5
    assert loaded.meta.nes_iteration == 12


def test_checkpoint_for_another_task_is_refused( cartpole_se, tmp_path ):

    path = save_se(cartpole_se, tmp_path / "se.json")

    with pytest.raises(TaskMismatchError):
        load_se(path, ACROBOT)


@pytest.mark.parametrize("corruption", ["truncate", "version", "missing_key", "params"])
def test_corrupt_checkpoints_raise_schema_errors( corruption, cartpole_se, tmp_path ):

    path = save_se(cartpole_se, tmp_path / "se.json")
    text = path.read_text()
    payload = json.loads(text)

    if corruption == "truncate":
        path.write_text(text[:len(text) // 2])

    else:

        if corruption == "version":
            payload['schema_version'] = 99
        elif corruption == "missing_key":
            del payload['meta']
        else:
            payload['params'] = payload['params'][:-1]

        path.write_text(json.dumps(payload))

    with pytest.raises(CheckpointSchemaError):
        load_se(path)


def test_missing_checkpoint_is_a_checkpoint_error( tmp_path ):

    with pytest.raises(CheckpointError, match="Cannot read"):
        load_se(tmp_path / "absent.json")


def test_binary_checkpoint_is_a_schema_error( tmp_path ):

    path = tmp_path / "se.json"
    path.write_bytes(b"\xff\xfe\x00\x81 not json")

    with pytest.raises(CheckpointSchemaError, match="Corrupt"):
        load_se(path)
