#!/usr/bin/env python3
"""
Learnable stateless MDP: an MLP mapping (state, one-hot action) to
(next state, reward). Synthetic episodes never terminate early; they run
for the real task's maximum episode length.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from envs.environment import Policy, reset_observation, run_episode
from envs.types import DoneCause, StepResult, TaskSpec, Transition
from network.mlp import Activation, FlatParams, MlpArchitecture, forward, init_params
from utils.error_handler import ConfigurationError, DimensionError, EpisodeDoneError, NumericalError


@dataclass(frozen=True)
class SeMeta:

    nes_iteration: int = 0
    eval_score: Optional[float] = None
    run_seed: Optional[int] = None


    def to_dict( self ) -> Dict[str, Any]:

        return {

            'nes_iteration': self.nes_iteration,
            'eval_score': self.eval_score,
            'run_seed': self.run_seed
        }


    @classmethod
    def from_dict( cls, data: Dict[str, Any] ) -> "SeMeta":

        eval_score = data.get('eval_score')
        run_seed = data.get('run_seed')

        return cls(

            nes_iteration=int(data.get('nes_iteration', 0)),
            eval_score=None if eval_score is None else float(eval_score),
            run_seed=None if run_seed is None else int(run_seed)
        )


@dataclass(frozen=True, eq=False)
class SyntheticEnvSpec:

    task: TaskSpec
    arch: MlpArchitecture
    params: FlatParams
    meta: SeMeta = field(default_factory=SeMeta)


    def __post_init__( self ) -> None:

        if self.arch.input_dim != self.task.obs_dim + self.task.n_actions:
            raise DimensionError(f"SE input width {self.arch.input_dim} != obs_dim + n_actions = {self.task.obs_dim + self.task.n_actions} for {self.task.name}", layer=0)

        if self.arch.output_dim != self.task.obs_dim + 1:
            raise DimensionError(f"SE output width {self.arch.output_dim} != obs_dim + 1 = {self.task.obs_dim + 1} for {self.task.name}", layer=self.arch.n_layers - 1)

        params = np.array(self.params, dtype=np.float64)

        if params.ndim != 1 or params.shape[0] != self.arch.param_count:
            raise DimensionError(f"SE expects {self.arch.param_count} parameters, got shape {params.shape}")

        if not np.all(np.isfinite(params)):
            raise NumericalError("SE parameters contain NaN/Inf")

        params.setflags(write=False)
        object.__setattr__(self, 'params', params)


    def with_params( self, params: FlatParams, **meta_updates: Any ) -> "SyntheticEnvSpec":

        return SyntheticEnvSpec(task=self.task, arch=self.arch, params=params, meta=replace(self.meta, **meta_updates))


def se_architecture( task: TaskSpec, hidden_sizes: Tuple[int, ...], activation: Activation ) -> MlpArchitecture:

    return MlpArchitecture(

        input_dim=task.obs_dim + task.n_actions,
        output_dim=task.obs_dim + 1,
        hidden_sizes=tuple(hidden_sizes),
        activation=activation
    )


def build_se_spec( task: TaskSpec, hidden_sizes: Tuple[int, ...], activation: Activation, rng: np.random.Generator, run_seed: Optional[int] = None ) -> SyntheticEnvSpec:

    arch = se_architecture(task, hidden_sizes, activation)
    return SyntheticEnvSpec(task=task, arch=arch, params=init_params(arch, rng), meta=SeMeta(run_seed=run_seed))


def one_hot( action: int, n_actions: int ) -> np.ndarray:

    if not 0 <= int(action) < n_actions:
        raise DimensionError(f"action {action} outside [0, {n_actions})", layer=0)

    encoded = np.zeros(n_actions, dtype=np.float64)
    encoded[int(action)] = 1.0
    return encoded


def se_step( spec: SyntheticEnvSpec, state: np.ndarray, action: int ) -> Tuple[np.ndarray, float]:

    state = np.asarray(state, dtype=np.float64)
    obs_dim = spec.task.obs_dim

    if state.shape != (obs_dim,):
        raise DimensionError(f"SE state must have shape ({obs_dim},), got {state.shape}", layer=0)

    output = forward(spec.arch, spec.params, np.concatenate([state, one_hot(action, spec.task.n_actions)]))

    return output[:obs_dim].copy(), float(output[obs_dim])


class SyntheticEnvironment:

    is_synthetic = True


    def __init__( self, spec: SyntheticEnvSpec, rng: np.random.Generator, max_steps: Optional[int] = None ):

        self.spec = spec
        self.task = spec.task
        self.rng = rng
        self.max_steps = max_steps or spec.task.max_episode_length

        self._state: Optional[np.ndarray] = None
        self._step_count = 0


    def reset( self ) -> np.ndarray:

        self._state = reset_observation(self.task, self.rng)
        self._step_count = 0
        return self._state.copy()


    def step( self, action: int ) -> StepResult:

        if self._state is None or self._step_count >= self.max_steps:
            raise EpisodeDoneError("synthetic environment step after episode end; call reset()")

        next_state, reward = se_step(self.spec, self._state, action)

        self._state = next_state
        self._step_count += 1

        done = self._step_count >= self.max_steps
        cause = DoneCause.TIME_LIMIT if done else DoneCause.NONE

        return StepResult(next_obs=next_state.copy(), reward=reward, done=done, done_cause=cause)


def se_episode( spec: SyntheticEnvSpec, agent: Policy, max_steps: int, rng: np.random.Generator, on_transition: Optional[Callable[[Transition], None]] = None, explore: bool = True ) -> List[Transition]:

    if max_steps != spec.task.max_episode_length:
        raise ConfigurationError(f"synthetic episodes run exactly {spec.task.max_episode_length} steps for {spec.task.name}, got {max_steps}")

    env = SyntheticEnvironment(spec, rng, max_steps)
    return run_episode(env, agent, explore, on_transition).transitions
