import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from agents.base import QNetworkPair, epsilon_schedule
from agents.ddqn import DDQNAgent, DuelingDDQNAgent, QNetwork, ddqn_act, ddqn_train_step, dueling_aggregate
from agents.factory import create_agent
from agents.replay_buffer import ReplayBuffer
from agents.td3_discrete import DiscreteTD3Agent, actor_objective, gumbel_softmax, td3d_act, td3d_train_step
from config.config_manager import AgentConfig, AgentKind
from envs.types import CARTPOLE, Transition
from network.mlp import Activation, Mlp, MlpArchitecture, unflatten
from network.optim import Adam
from utils.error_handler import AgentError, ConfigurationError
from verification.small_mdp import TWO_STATE_DISCOUNT, greedy_policy, q_table, train_on_small_mdp, value_iteration


def transition( index: int, obs_dim: int = 4, soft: bool = False ) -> Transition:

    return Transition(

        state=np.full(obs_dim, float(index)),
        action=index % 2,
        reward=float(index),
        next_state=np.full(obs_dim, index + 1.0),
        terminal=index % 5 == 0,
        soft_action=np.array([0.5, 0.5]) if soft else None
    )


# Replay buffer


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 20), st.integers(0, 60))
def test_replay_buffer_keeps_the_newest_items_in_order( capacity, n_pushed ):

    buffer = ReplayBuffer(capacity, np.random.default_rng(0))

    for index in range(n_pushed):
        buffer.push(transition(index))

    kept = list(range(max(0, n_pushed - capacity), n_pushed))

    assert len(buffer) == min(capacity, n_pushed)
    assert [t.reward for t in buffer.transitions()] == [float(i) for i in kept]


def test_replay_buffer_samples_stored_rows( rng ):

    buffer = ReplayBuffer(10, rng)

    for index in range(4):
        buffer.push(transition(index))

    batch = buffer.sample(32)

    assert len(batch) == 32
    assert set(batch.rewards.tolist()) <= {0.0, 1.0, 2.0, 3.0}
    assert_array_equal(batch.next_states[:, 0], batch.states[:, 0] + 1.0)


def test_replay_buffer_errors( rng ):

    with pytest.raises(AgentError):
        ReplayBuffer(0, rng)

    buffer = ReplayBuffer(4, rng)

    with pytest.raises(AgentError):
        buffer.sample(1)

    buffer.push(transition(0))

    with pytest.raises(AgentError):
        buffer.push(transition(1, soft=True))


# Shared agent machinery


def test_epsilon_decays_per_episode_down_to_the_floor():

    config = AgentConfig(eps_init=1.0, eps_min=0.1, eps_decay=0.5)

    assert epsilon_schedule(config, 0) == 1.0
    assert epsilon_schedule(config, 2) == 0.25
    assert epsilon_schedule(config, 10) == 0.1

    with pytest.raises(AgentError):
        epsilon_schedule(config, -1)


def test_soft_update_blends_towards_online( rng, tiny_agent_config ):

    pair = QNetworkPair.create(QNetwork.build(4, 2, tiny_agent_config(), rng))
    pair.online.params[...] = 1.0
    pair.target.params[...] = 0.0

    pair.soft_update(0.25)

    assert_allclose(pair.target.params, 0.25)


def test_repeated_soft_updates_close_the_gap_geometrically( rng, tiny_agent_config ):

    pair = QNetworkPair.create(QNetwork.build(4, 2, tiny_agent_config(), rng))
    pair.online.params[...] = 1.0
    pair.target.params[...] = 0.0

    gaps = []

    for _ in range(20):
        pair.soft_update(0.1)
        gaps.append(float(np.max(np.abs(pair.online.params - pair.target.params))))

    assert_allclose(gaps, 0.9 ** np.arange(1, 21))
    assert_allclose(pair.target.params, 1.0 - 0.9 ** 20)


def test_factory_builds_every_kind( rng, tiny_agent_config ):

    expected = {

        AgentKind.DDQN: DDQNAgent,
        AgentKind.DUELING_DDQN: DuelingDDQNAgent,
        AgentKind.DISCRETE_TD3: DiscreteTD3Agent
    }

    for kind, agent_class in expected.items():
        assert type(create_agent(CARTPOLE, tiny_agent_config(kind), rng)) is agent_class


def test_factory_rejects_invalid_configs( rng ):

    with pytest.raises(ConfigurationError):
        create_agent(CARTPOLE, AgentConfig(discount=1.0), rng)

    with pytest.raises(ConfigurationError):
        create_agent(CARTPOLE, AgentConfig(batch_size=64, replay_buffer_size=32), rng)


def test_initial_episodes_collect_without_learning( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config().with_hps(initial_episodes=2), rng)
    agent.begin_episode(0)
    before = agent.snapshot()

    for index in range(20):
        assert agent.observe(transition(index)) is None

    assert agent.train_steps == 0
    assert_array_equal(agent.snapshot()['online'], before['online'])

    agent.begin_episode(2)

    assert agent.observe(transition(21)) is not None
    assert agent.train_steps == 1


def test_greedy_selection_ignores_exploration( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config().with_hps(initial_episodes=0), rng)
    state = np.array([0.01, -0.02, 0.03, 0.0])

    assert len({agent.act(state, explore=False) for _ in range(20)}) == 1


# DDQN


def test_ddqn_act_validates_epsilon( rng, tiny_agent_config ):

    pair = QNetworkPair.create(QNetwork.build(4, 2, tiny_agent_config(), rng))

    with pytest.raises(AgentError):
        ddqn_act(pair, np.zeros(4), 1.5, rng)

    assert ddqn_act(pair, np.zeros(4), 0.0, rng) == int(np.argmax(pair.online.q_values(np.zeros(4))))


def test_ddqn_train_step_waits_for_a_full_batch( rng, tiny_agent_config ):

    config = tiny_agent_config()
    pair = QNetworkPair.create(QNetwork.build(4, 2, config, rng))
    buffer = ReplayBuffer(100, rng)
    optimizer = Adam(pair.online.params.shape[0], config.learning_rate)

    for index in range(config.batch_size - 1):
        buffer.push(transition(index))

    assert ddqn_train_step(pair, buffer, config, optimizer) is None

    buffer.push(transition(99))
    target_before = pair.target.params.copy()
    loss = ddqn_train_step(pair, buffer, config, optimizer)

    assert loss is not None and loss >= 0.0
    assert not np.array_equal(pair.target.params, target_before)


def test_dueling_aggregation_centres_the_advantages():

    q = dueling_aggregate(np.array([2.0, -1.0]), np.array([[1.0, 3.0], [0.0, 0.0]]))

    assert_allclose(q, [[1.0, 3.0], [-1.0, -1.0]])
    assert_allclose(q.mean(axis=-1), [2.0, -1.0])


def test_ddqn_act_with_full_exploration_is_uniform( rng, tiny_agent_config ):

    pair = QNetworkPair.create(QNetwork.build(6, 3, tiny_agent_config(), rng))
    state = np.array([1.0, 0.0, 1.0, 0.0, 0.3, -0.2])

    counts = np.bincount([ddqn_act(pair, state, 1.0, rng) for _ in range(30_000)], minlength=3)

    assert_allclose(counts / counts.sum(), 1.0 / 3.0, atol=0.015)


@settings(max_examples=50, deadline=None)
@given(

    value=st.floats(-100, 100),
    advantages=st.lists(st.floats(-100, 100), min_size=2, max_size=5),
    shift=st.floats(-1000, 1000)
)
def test_dueling_aggregation_ignores_a_constant_advantage_shift( value, advantages, shift ):

    advantages = np.array(advantages)

    assert_allclose(

        dueling_aggregate(np.array(value), advantages + shift),
        dueling_aggregate(np.array(value), advantages),
        atol=1e-9
    )


# Discrete TD3


def test_gumbel_softmax_is_a_distribution( rng ):

    soft = gumbel_softmax(rng.standard_normal((5, 3)), 0.7, rng.gumbel(size=(5, 3)))

    assert np.all(soft >= 0)
    assert_allclose(soft.sum(axis=-1), 1.0)


def test_td3_act_rejects_non_positive_temperature( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config(AgentKind.DISCRETE_TD3), rng)

    with pytest.raises(AgentError):
        td3d_act(agent.nets.actor.online, np.zeros(4), 0.0, rng)

    with pytest.raises(AgentError):
        td3d_act(agent.nets.actor.online, np.zeros(4), 1.0, rng, mode="argmax")


def test_td3_greedy_action_is_the_logit_argmax( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config(AgentKind.DISCRETE_TD3), rng)
    state = np.array([0.1, 0.0, -0.1, 0.2])

    action, soft = td3d_act(agent.nets.actor.online, state, 1.0, rng, mode="greedy")

    assert action == int(np.argmax(agent.nets.actor.online.predict(state)))
    assert int(np.argmax(soft)) == action


def test_td3_random_actions_store_one_hot_soft_actions( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config(AgentKind.DISCRETE_TD3), rng)
    agent.begin_episode(0)

    action, soft = agent.select_action(np.zeros(4), explore=True)

    assert_array_equal(soft, np.eye(2)[action])


def test_td3_actor_gradients_match_finite_differences( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config(AgentKind.DISCRETE_TD3).with_hps(activation=Activation.TANH), rng)
    actor = agent.nets.actor.online
    critic = agent.nets.critics[0].online
    states = rng.standard_normal((6, 4))
    noise = rng.gumbel(size=(6, 2))
    log_t = 0.3

    _, grad_actor, grad_log_t = actor_objective(actor, log_t, critic, states, noise)

    def loss( params, log_temperature ):

        perturbed = actor.copy()
        perturbed.params[...] = params
        return actor_objective(perturbed, log_temperature, critic.copy(), states, noise)[0]

    h = 1e-6
    base = actor.params.copy()

    for index in (0, 5, len(base) - 1):

        shifted = np.zeros_like(base)
        shifted[index] = h
        numeric = (loss(base + shifted, log_t) - loss(base - shifted, log_t)) / (2 * h)
        assert grad_actor.values[index] == pytest.approx(numeric, rel=1e-4, abs=1e-8)

    numeric_t = (loss(base, log_t + h) - loss(base, log_t - h)) / (2 * h)
    assert grad_log_t == pytest.approx(numeric_t, rel=1e-4, abs=1e-8)


def test_td3_updates_actor_every_policy_delay_steps( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config(AgentKind.DISCRETE_TD3).with_hps(initial_episodes=0, policy_delay=2), rng)
    agent.begin_episode(0)

    for index in range(agent.config.batch_size):
        agent.buffer.push(transition(index, obs_dim=4, soft=True))

    actor_before = agent.nets.actor.online.params.copy()

    agent.train_steps = 1
    agent.update()
    assert_array_equal(agent.nets.actor.online.params, actor_before)

    agent.train_steps = 2
    agent.update()
    assert not np.array_equal(agent.nets.actor.online.params, actor_before)
    assert agent.last_actor_loss is not None


def constant_logit_actor( logits ) -> Mlp:

    # Zero weights: the output bias alone sets the logits for every state
    arch = MlpArchitecture(input_dim=4, output_dim=len(logits), hidden_sizes=(2,))
    actor = Mlp(arch, np.zeros(arch.param_count))
    unflatten(arch, actor.params)[1][-1][...] = logits

    return actor


def test_td3_act_follows_dominant_logits( rng ):

    actor = constant_logit_actor([10.0, -10.0])
    picks = [td3d_act(actor, np.zeros(4), 1.0, rng)[0] for _ in range(10_000)]

    assert sum(picks) == 0


def test_td3_soft_actions_flatten_at_high_temperature( rng ):

    actor = constant_logit_actor([10.0, -10.0])
    soft = np.array([td3d_act(actor, np.zeros(4), 1000.0, rng)[1] for _ in range(2_000)])

    assert_allclose(soft, 0.5, atol=0.05)
    assert_allclose(td3d_act(actor, np.zeros(4), 1000.0, rng, mode="greedy")[1], [0.505, 0.495], atol=1e-4)


def test_td3_picks_among_equal_logits_uniformly( rng ):

    actor = constant_logit_actor([0.0, 0.0, 0.0])
    counts = np.bincount([td3d_act(actor, np.zeros(4), 5.0, rng)[0] for _ in range(30_000)], minlength=3)

    assert_allclose(counts / counts.sum(), 1.0 / 3.0, atol=0.015)


def test_identical_twin_critics_act_as_one( rng, tiny_agent_config ):

    agent = create_agent(CARTPOLE, tiny_agent_config(AgentKind.DISCRETE_TD3), rng)
    nets = agent.nets
    first = nets.critics[0]
    nets.critics[1] = QNetworkPair(online=first.online.copy(), target=first.target.copy())

    states = rng.standard_normal((16, 4))
    soft_actions = gumbel_softmax(rng.standard_normal((16, 2)), 1.0, rng.gumbel(size=(16, 2)))

    assert_array_equal(

        np.minimum(first.target.value(states, soft_actions), nets.critics[1].target.value(states, soft_actions)),
        first.target.value(states, soft_actions)
    )

    for index in range(agent.config.batch_size):
        agent.buffer.push(transition(index, obs_dim=4, soft=True))

    critic_loss, actor_loss = td3d_train_step(nets, agent.buffer, agent.config, 1, rng)

    assert actor_loss is None
    assert critic_loss > 0.0
    assert_array_equal(nets.critics[0].online.params, nets.critics[1].online.params)


# Small MDP oracle


def test_value_iteration_solves_the_two_state_mdp():

    assert_allclose(value_iteration(TWO_STATE_DISCOUNT), [[1.5, 3.0], [4.0, 1.5]], atol=1e-10)


def test_ddqn_recovers_the_optimal_policy_on_the_small_mdp():

    agent = train_on_small_mdp(AgentKind.DDQN, seed=0, steps=10000, learning_rate=0.001)

    assert greedy_policy(agent) == (1, 0)
    assert_allclose(q_table(agent), value_iteration(TWO_STATE_DISCOUNT), atol=1e-2)


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(AgentKind))
@pytest.mark.parametrize("seed", range(5))
def test_every_agent_recovers_the_optimal_policy_on_the_small_mdp( kind, seed ):

    assert greedy_policy(train_on_small_mdp(kind, seed)) == (1, 0)
