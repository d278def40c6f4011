#!/usr/bin/env python3
"""
Two-state deterministic MDP with a value-iteration oracle.

    state 0: action 0 stays (r=0), action 1 moves to state 1 (r=1)
    state 1: action 0 stays (r=2), action 1 moves to state 0 (r=0)

With discount 0.5 the optimal Q table is [[1.5, 3], [4, 1.5]], so the greedy
policy is (1, 0). Episodes are fixed-length with no physical termination.
"""

from typing import Optional, Tuple

import numpy as np

from agents.base import Agent
from agents.factory import create_agent
from config.config_manager import AgentConfig, AgentKind, TrainingConfig
from envs.types import DoneCause, StepResult, TaskSpec
from network.mlp import Activation
from training.trainer import train_agent


TWO_STATE_TASK = TaskSpec(name="TwoStateMDP", obs_dim=2, n_actions=2, max_episode_length=10, solved_reward=float('inf'))
TWO_STATE_DISCOUNT = 0.5

NEXT_STATE = np.array([[0, 1], [1, 0]])
REWARD = np.array([[0.0, 1.0], [2.0, 0.0]])


def value_iteration( discount: float = TWO_STATE_DISCOUNT, tolerance: float = 1e-12 ) -> np.ndarray:

    q = np.zeros_like(REWARD)

    while True:

        updated = REWARD + discount * q.max(axis=1)[NEXT_STATE]

        if np.max(np.abs(updated - q)) < tolerance:
            return updated

        q = updated


def encode( state: int ) -> np.ndarray:

    return np.eye(2)[state]


class TwoStateMdp:

    # Treated like a synthetic environment: fixed-length episodes, no test episodes

    is_synthetic = True
    task = TWO_STATE_TASK


    def __init__( self, rng: np.random.Generator ):

        self.rng = rng
        self.state = 0
        self.steps = 0


    def reset( self ) -> np.ndarray:

        self.state = int(self.rng.integers(2))
        self.steps = 0
        return encode(self.state)


    def step( self, action: int ) -> StepResult:

        reward = float(REWARD[self.state, action])
        self.state = int(NEXT_STATE[self.state, action])
        self.steps += 1

        done = self.steps >= self.task.max_episode_length
        cause = DoneCause.TIME_LIMIT if done else DoneCause.NONE

        return StepResult(next_obs=encode(self.state), reward=reward, done=done, done_cause=cause)


def small_mdp_config( kind: AgentKind, learning_rate: float = 0.005 ) -> AgentConfig:

    return AgentConfig.for_kind(kind).with_hps(

        learning_rate=learning_rate,
        batch_size=32,
        hidden_size=32,
        hidden_layers=1,
        target_update_rate=0.05,
        discount=TWO_STATE_DISCOUNT,
        eps_init=1.0,
        eps_min=0.1,
        eps_decay=0.95,
        initial_episodes=5,
        activation=Activation.TANH if kind is AgentKind.DISCRETE_TD3 else Activation.RELU,
        replay_buffer_size=10000
    )


def train_on_small_mdp( kind: AgentKind, seed: int, steps: int = 5000, learning_rate: float = 0.005 ) -> Agent:

    rng = np.random.default_rng(seed)
    config = small_mdp_config(kind, learning_rate)
    agent = create_agent(TWO_STATE_TASK, config, rng)

    training = TrainingConfig(max_episodes=steps // TWO_STATE_TASK.max_episode_length, stop_heuristics=False)
    train_agent(agent, TwoStateMdp(rng), training, rng)

    return agent


def greedy_policy( agent: Agent ) -> Tuple[int, int]:

    return tuple(agent.act(encode(state), explore=False) for state in (0, 1))


def q_table( agent: Agent ) -> Optional[np.ndarray]:

    # Only value-based agents expose a Q table

    net = getattr(agent, 'net', None)

    if net is None:
        return None

    return np.array([net.online.q_values(encode(state)) for state in (0, 1)])
