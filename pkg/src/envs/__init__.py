#!/usr/bin/env python3

from .types import (

    TaskSpec,
    CARTPOLE,
    ACROBOT,
    get_task,
    DoneCause,
    EnvState,
    StepResult,
    Transition
)
from .environment import (

    Environment,
    Policy,
    RealEnvironment,
    EpisodeResult,
    reset,
    reset_observation,
    step,
    step_cartpole,
    step_acrobot,
    cumulative_reward,
    run_episode,
    make_environment
)

__all__ = [

    'TaskSpec',
    'CARTPOLE',
    'ACROBOT',
    'get_task',
    'DoneCause',
    'EnvState',
    'StepResult',
    'Transition',
    'Environment',
    'Policy',
    'RealEnvironment',
    'EpisodeResult',
    'reset',
    'reset_observation',
    'step',
    'step_cartpole',
    'step_acrobot',
    'cumulative_reward',
    'run_episode',
    'make_environment'
]
