#!/usr/bin/env python3
"""
Versioned trajectory fixtures.

    # schema_version=1
    # task=CartPole-v0
    # initial_state=<hex>,<hex>,...
    step,action,obs_0,...,obs_k,reward,done

Rows hold the observation after each step. Trajectories come from the raw
dynamics and keep going past physical termination, so every script is the
same length.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence

import numpy as np
import pandas as pd

from envs.acrobot import reset_acrobot
from envs.cartpole import reset_cartpole
from envs.types import ACROBOT, CARTPOLE, TaskSpec, get_task
from utils.error_handler import VerificationError
from .reference import ReferenceAcrobot, ReferenceCartPole


FIXTURE_SCHEMA_VERSION = 1

REFERENCES = {

    CARTPOLE.name: (ReferenceCartPole, reset_cartpole),
    ACROBOT.name: (ReferenceAcrobot, reset_acrobot)
}


@dataclass
class TrajectoryFixture:

    task: TaskSpec
    initial_state: np.ndarray
    actions: np.ndarray
    observations: np.ndarray
    rewards: np.ndarray
    dones: np.ndarray


def reference_trajectory( task: TaskSpec, initial_state: Sequence[float], actions: Sequence[int] ) -> TrajectoryFixture:

    reference_class, _ = REFERENCES[task.name]
    env = reference_class(initial_state)
    observations, rewards, dones = [], [], []

    for action in actions:

        observation, reward, done = env.step(int(action))
        observations.append(observation)
        rewards.append(reward)
        dones.append(done)

    return TrajectoryFixture(

        task=task,
        initial_state=np.array(initial_state, dtype=np.float64),
        actions=np.array(actions, dtype=np.int64),
        observations=np.array(observations, dtype=np.float64),
        rewards=np.array(rewards, dtype=np.float64),
        dones=np.array(dones, dtype=bool)
    )


def random_scripts( task: TaskSpec, n_scripts: int, n_steps: int, seed: int ) -> List[TrajectoryFixture]:

    _, draw = REFERENCES[task.name]
    rng = np.random.default_rng(seed)
    fixtures = []

    for _ in range(n_scripts):

        initial_state = draw(rng)
        actions = rng.integers(task.n_actions, size=n_steps)
        fixtures.append(reference_trajectory(task, initial_state, actions))

    return fixtures


def write_trajectory_fixture( fixture: TrajectoryFixture, path: Path ) -> None:

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    n_obs = fixture.observations.shape[1]
    frame = pd.DataFrame({'step': np.arange(len(fixture.actions)), 'action': fixture.actions})

    for index in range(n_obs):
        frame[f'obs_{index}'] = fixture.observations[:, index]

    frame['reward'] = fixture.rewards
    frame['done'] = fixture.dones.astype(int)

    with path.open('w', encoding='utf-8', newline='') as f:

        f.write(f"# schema_version={FIXTURE_SCHEMA_VERSION}\n")
        f.write(f"# task={fixture.task.name}\n")
        f.write(f"# initial_state={','.join(float(v).hex() for v in fixture.initial_state)}\n")
        frame.to_csv(f, index=False, float_format='%.17g')


def read_trajectory_fixture( path: Path ) -> TrajectoryFixture:

    path = Path(path)
    header = {}

    with path.open('r', encoding='utf-8') as f:

        for line in f:

            if not line.startswith('#'):
                break

            key, _, value = line[1:].strip().partition('=')
            header[key.strip()] = value.strip()

    if header.get('schema_version') != str(FIXTURE_SCHEMA_VERSION):
        raise VerificationError(f"{path}: unsupported fixture schema {header.get('schema_version')!r}")

    if 'task' not in header or 'initial_state' not in header:
        raise VerificationError(f"{path}: fixture header lacks task or initial_state")

    task = get_task(header['task'])
    frame = pd.read_csv(path, comment='#', float_precision='round_trip')
    obs_columns = [f'obs_{index}' for index in range(task.obs_dim)]

    missing = [column for column in ['step', 'action', *obs_columns, 'reward', 'done'] if column not in frame.columns]

    if missing:
        raise VerificationError(f"{path}: fixture lacks columns {missing}")

    return TrajectoryFixture(

        task=task,
        initial_state=np.array([float.fromhex(v) for v in header['initial_state'].split(',')], dtype=np.float64),
        actions=frame['action'].to_numpy(dtype=np.int64),
        observations=frame[obs_columns].to_numpy(dtype=np.float64),
        rewards=frame['reward'].to_numpy(dtype=np.float64),
        dones=frame['done'].to_numpy(dtype=bool)
    )


def write_fixture_set( out_dir: Path, n_scripts: int = 10, n_steps: int = 500, seed: int = 0 ) -> List[Path]:

    out_dir = Path(out_dir)
    paths = []

    for task in (CARTPOLE, ACROBOT):

        for index, fixture in enumerate(random_scripts(task, n_scripts, n_steps, seed)):

            path = out_dir / f"{task.name.split('-')[0].lower()}_{index:02d}.csv"
            write_trajectory_fixture(fixture, path)
            paths.append(path)

    return paths
