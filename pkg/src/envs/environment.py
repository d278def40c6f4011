#!/usr/bin/env python3

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Protocol, Sequence, Tuple

import numpy as np

from utils.error_handler import ConfigurationError, EpisodeDoneError
from .types import ACROBOT, CARTPOLE, DoneCause, EnvState, StepResult, TaskSpec, Transition
from .cartpole import cartpole_dynamics, cartpole_observation, reset_cartpole
from .acrobot import acrobot_dynamics, acrobot_observation, reset_acrobot


_RESETS = {

    CARTPOLE.name: (reset_cartpole, cartpole_observation),
    ACROBOT.name: (reset_acrobot, acrobot_observation)
}


def reset( task: TaskSpec, rng: np.random.Generator ) -> EnvState:

    if task.name not in _RESETS:
        raise ConfigurationError(f"No native implementation for task {task.name}")

    draw, observe = _RESETS[task.name]
    physical = draw(rng)

    return EnvState(task=task, physical=physical, observation=observe(physical))


def reset_observation( task: TaskSpec, rng: np.random.Generator ) -> np.ndarray:

    # Initial observation from the real task's reset distribution (also used by synthetic environments)

    return reset(task, rng).observation


def _advance( state: EnvState, next_physical: np.ndarray, terminal: bool, reward: float, observe: Callable ) -> StepResult:

    state.physical = next_physical
    state.observation = observe(next_physical)
    state.step_count += 1

    if terminal:
        cause = DoneCause.TERMINAL

    elif state.step_count >= state.task.max_episode_length:
        cause = DoneCause.TIME_LIMIT

    else:
        cause = DoneCause.NONE

    state.done = cause is not DoneCause.NONE

    return StepResult(next_obs=state.observation.copy(), reward=reward, done=state.done, done_cause=cause)


def step_cartpole( state: EnvState, action: int ) -> StepResult:

    # Advances state in place

    if state.done:
        raise EpisodeDoneError("CartPole step after episode end; call reset()")

    next_physical, terminal = cartpole_dynamics(state.physical, action)

    return _advance(state, next_physical, terminal, 1.0, cartpole_observation)


def step_acrobot( state: EnvState, action: int ) -> StepResult:

    # Advances state in place

    if state.done:
        raise EpisodeDoneError("Acrobot step after episode end; call reset()")

    next_physical, terminal = acrobot_dynamics(state.physical, action)
    reward = 0.0 if terminal else -1.0

    return _advance(state, next_physical, terminal, reward, acrobot_observation)


def step( state: EnvState, action: int ) -> StepResult:

    if state.task.name == CARTPOLE.name:
        return step_cartpole(state, action)

    return step_acrobot(state, action)


def cumulative_reward( episode: Sequence[StepResult] ) -> float:

    return float(sum(result.reward for result in episode))


class Environment(Protocol):

    task: TaskSpec
    is_synthetic: bool

    def reset( self ) -> np.ndarray: ...

    def step( self, action: int ) -> StepResult: ...


class Policy(Protocol):

    def select_action( self, state: np.ndarray, explore: bool ) -> Tuple[int, Optional[np.ndarray]]: ...


class RealEnvironment:

    is_synthetic = False


    def __init__( self, task: TaskSpec, rng: np.random.Generator ):

        self.task = task
        self.rng = rng
        self.state: Optional[EnvState] = None


    def reset( self ) -> np.ndarray:

        self.state = reset(self.task, self.rng)
        return self.state.observation.copy()


    def step( self, action: int ) -> StepResult:

        if self.state is None:
            raise EpisodeDoneError("step() before reset()")

        return step(self.state, action)


@dataclass
class EpisodeResult:

    transitions: List[Transition] = field(default_factory=list)
    results: List[StepResult] = field(default_factory=list)


    @property
    def total_reward( self ) -> float:

        return cumulative_reward(self.results)


    @property
    def length( self ) -> int:

        return len(self.results)


def run_episode( env: Environment, policy: Policy, explore: bool, on_transition: Optional[Callable[[Transition], None]] = None ) -> EpisodeResult:

    episode = EpisodeResult()
    observation = env.reset()

    while True:

        action, soft_action = policy.select_action(observation, explore)
        result = env.step(action)

        transition = Transition(

            state=observation,
            action=int(action),
            reward=float(result.reward),
            next_state=result.next_obs,
            terminal=result.done_cause is DoneCause.TERMINAL,
            soft_action=soft_action
        )

        episode.transitions.append(transition)
        episode.results.append(result)

        if on_transition is not None:
            on_transition(transition)

        observation = result.next_obs

        if result.done:
            return episode


def make_environment( task: TaskSpec, rng: np.random.Generator ) -> RealEnvironment:

    if task.name not in _RESETS:
        raise ConfigurationError(f"No native implementation for task {task.name}")

    return RealEnvironment(task, rng)
