#!/usr/bin/env python3
"""
Inner loop: train one agent on a real or synthetic environment until a stop
heuristic fires or the episode budget runs out, then score it on the real task.

Synthetic environments stop on convergence of the training returns. Real
environments run one greedy test episode after every training episode and stop
once the recent test returns reach the solved threshold; those test steps are
counted apart from the training steps.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional

import numpy as np

from agents.base import Agent
from config.config_manager import TrainingConfig
from envs.environment import Environment, EpisodeResult, Policy, make_environment, run_episode
from envs.types import TaskSpec, Transition
from utils.error_handler import NumericalError
from utils.logger import Logger
from .heuristics import StopHeuristicState, real_stop_check, se_stop_check


class StopCause(str, Enum):

    CONVERGED = "Converged"
    SOLVED = "Solved"
    MAX_EPISODES = "MaxEpisodes"
    DIVERGED = "Diverged"


@dataclass
class TrainReport:

    episodes_used: int = 0
    env_steps_used: int = 0
    eval_steps_used: int = 0
    stop_cause: StopCause = StopCause.MAX_EPISODES
    returns: List[float] = field(default_factory=list)
    test_returns: List[float] = field(default_factory=list)


    def to_dict( self ) -> dict:

        return {

            'episodes_used': self.episodes_used,
            'env_steps_used': self.env_steps_used,
            'eval_steps_used': self.eval_steps_used,
            'stop_cause': self.stop_cause.value,
            'returns': list(self.returns),
            'test_returns': list(self.test_returns)
        }


def train_agent( agent: Agent, env: Environment, config: TrainingConfig, rng: np.random.Generator, logger: Optional[Logger] = None, on_transition: Optional[Callable[[Transition], None]] = None ) -> TrainReport:

    report = TrainReport()
    heuristic = StopHeuristicState(d=config.early_out_num, c_diff=config.early_out_diff)
    test_env = None if env.is_synthetic else make_environment(env.task, rng)

    partial: List[Transition] = []

    def observe( transition: Transition ) -> None:

        partial.append(transition)
        agent.observe(transition)

        if on_transition is not None:
            on_transition(transition)

    for episode_index in range(config.max_episodes):

        agent.begin_episode(episode_index)
        partial.clear()

        try:
            episode = run_episode(env, agent, explore=True, on_transition=observe)

        except NumericalError as e:

            # A diverging SE blows up the TD targets; the agent keeps its last finite parameters
            report.episodes_used += 1
            report.env_steps_used += len(partial)
            report.returns.append(float(sum(t.reward for t in partial)))
            report.stop_cause = StopCause.DIVERGED

            if logger:
                logger.debug(f"[!] Training stopped in episode {episode_index}: {e}")

            break

        report.episodes_used += 1
        report.env_steps_used += episode.length
        report.returns.append(episode.total_reward)
        heuristic.record(episode.total_reward)

        if env.is_synthetic:

            if config.stop_heuristics and se_stop_check(heuristic):
                report.stop_cause = StopCause.CONVERGED
                break

            continue

        test = run_episode(test_env, agent, explore=False)
        report.eval_steps_used += test.length
        report.test_returns.append(test.total_reward)

        if config.stop_heuristics and real_stop_check(report.test_returns, env.task, config.early_out_num):
            report.stop_cause = StopCause.SOLVED
            break

    if logger:
        logger.debug(f"[>] Trained {type(agent).__name__} on {'SE' if env.is_synthetic else 'real'} {env.task.name}: {report.episodes_used} episodes, {report.env_steps_used} steps, {report.stop_cause.value}")

    return report


def evaluate_agent_episodes( agent: Policy, task: TaskSpec, n_test: int, rng: np.random.Generator, on_transition: Optional[Callable[[Transition], None]] = None ) -> List[EpisodeResult]:

    # Greedy episodes on the real task; the agent does not learn from them

    env = make_environment(task, rng)
    return [run_episode(env, agent, explore=False, on_transition=on_transition) for _ in range(n_test)]


def evaluate_agent( agent: Policy, task: TaskSpec, n_test: int = 10, rng: Optional[np.random.Generator] = None ) -> float:

    rng = rng if rng is not None else np.random.default_rng()
    episodes = evaluate_agent_episodes(agent, task, n_test, rng)

    return float(np.mean([episode.total_reward for episode in episodes]))
