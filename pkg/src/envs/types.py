#!/usr/bin/env python3

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, NamedTuple, Optional

import numpy as np

from utils.error_handler import ConfigurationError


@dataclass(frozen=True)
class TaskSpec:

    name: str
    obs_dim: int
    n_actions: int
    max_episode_length: int
    solved_reward: float


    def to_dict( self ) -> Dict[str, Any]:

        return {

            'name': self.name,
            'obs_dim': self.obs_dim,
            'n_actions': self.n_actions,
            'max_episode_length': self.max_episode_length,
            'solved_reward': self.solved_reward
        }


CARTPOLE = TaskSpec(name="CartPole-v0", obs_dim=4, n_actions=2, max_episode_length=200, solved_reward=195.0)
ACROBOT = TaskSpec(name="Acrobot-v1", obs_dim=6, n_actions=3, max_episode_length=500, solved_reward=-100.0)

TASKS: Dict[str, TaskSpec] = {

    'cartpole': CARTPOLE,
    'cartpole-v0': CARTPOLE,
    'acrobot': ACROBOT,
    'acrobot-v1': ACROBOT
}


def get_task( name: str ) -> TaskSpec:

    key = str(name).strip().lower()

    if key not in TASKS:
        raise ConfigurationError(f"Unknown task: {name}. Must be 'CartPole-v0' or 'Acrobot-v1'")

    return TASKS[key]


class DoneCause(str, Enum):

    TERMINAL = "terminal"
    TIME_LIMIT = "time_limit"
    NONE = "none"


@dataclass
class EnvState:

    # physical: CartPole [x, x_dot, theta, theta_dot]; Acrobot [theta1, theta2, dtheta1, dtheta2]

    task: TaskSpec
    physical: np.ndarray
    observation: np.ndarray
    step_count: int = 0
    done: bool = False


@dataclass(frozen=True)
class StepResult:

    next_obs: np.ndarray
    reward: float
    done: bool
    done_cause: DoneCause = DoneCause.NONE


class Transition(NamedTuple):

    # terminal is true only on physical termination, never on a time limit

    state: np.ndarray
    action: int
    reward: float
    next_state: np.ndarray
    terminal: bool
    soft_action: Optional[np.ndarray] = None
