#!/usr/bin/env python3

from .reference import ReferenceCartPole, ReferenceAcrobot, naive_forward
from .fixtures import (

    FIXTURE_SCHEMA_VERSION,
    TrajectoryFixture,
    reference_trajectory,
    random_scripts,
    write_trajectory_fixture,
    read_trajectory_fixture,
    write_fixture_set
)
from .small_mdp import (

    TWO_STATE_TASK,
    TwoStateMdp,
    value_iteration,
    train_on_small_mdp,
    greedy_policy,
    q_table
)
from .checks import CHECKS, CheckResult, run_checks, replay_deviation, gradient_relative_error

__all__ = [

    'ReferenceCartPole',
    'ReferenceAcrobot',
    'naive_forward',
    'FIXTURE_SCHEMA_VERSION',
    'TrajectoryFixture',
    'reference_trajectory',
    'random_scripts',
    'write_trajectory_fixture',
    'read_trajectory_fixture',
    'write_fixture_set',
    'TWO_STATE_TASK',
    'TwoStateMdp',
    'value_iteration',
    'train_on_small_mdp',
    'greedy_policy',
    'q_table',
    'CHECKS',
    'CheckResult',
    'run_checks',
    'replay_deviation',
    'gradient_relative_error'
]
