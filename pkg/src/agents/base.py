#!/usr/bin/env python3

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from config.config_manager import AgentConfig, AgentKind
from envs.types import Transition
from utils.error_handler import AgentError
from .replay_buffer import ReplayBuffer


def epsilon_schedule( config: AgentConfig, episode_index: int ) -> float:

    # Decays per episode, not per step

    if episode_index < 0:
        raise AgentError(f"episode_index must be >= 0, got {episode_index}")

    return max(config.eps_min, config.eps_init * config.eps_decay ** episode_index)


@dataclass
class QNetworkPair:

    # online and target copies of one network; target starts as a copy of online

    online: object
    target: object


    @classmethod
    def create( cls, network ) -> "QNetworkPair":

        return cls(online=network, target=network.copy())


    def soft_update( self, tau: float ) -> None:

        self.target.params[...] = (1.0 - tau) * self.target.params + tau * self.online.params


class Agent(ABC):

    kind: AgentKind


    def __init__( self, obs_dim: int, n_actions: int, config: AgentConfig, rng: np.random.Generator ):

        self.obs_dim = obs_dim
        self.n_actions = n_actions
        self.config = config
        self.rng = rng

        self.buffer = ReplayBuffer(config.replay_buffer_size, rng)
        self.episode_index = 0
        self.train_steps = 0


    @property
    def collecting( self ) -> bool:

        # Pure random-action data collection during the initial episodes

        return self.episode_index < self.config.initial_episodes


    def begin_episode( self, episode_index: int ) -> None:

        self.episode_index = episode_index


    def select_action( self, state: np.ndarray, explore: bool ) -> Tuple[int, Optional[np.ndarray]]:

        if not explore:
            return self.greedy_action(state), None

        if self.collecting:
            return self._random_action()

        return self._explore_action(state)


    def act( self, state: np.ndarray, explore: bool = False ) -> int:

        return self.select_action(state, explore)[0]


    def observe( self, transition: Transition ) -> Optional[float]:

        # Store, then one gradient step per environment step once collection is over

        self.buffer.push(transition)

        if self.collecting:
            return None

        loss = self.update()

        if loss is not None:
            self.train_steps += 1

        return loss


    def _random_action( self ) -> Tuple[int, Optional[np.ndarray]]:

        return int(self.rng.integers(self.n_actions)), None


    @abstractmethod
    def greedy_action( self, state: np.ndarray ) -> int:
        ...


    @abstractmethod
    def _explore_action( self, state: np.ndarray ) -> Tuple[int, Optional[np.ndarray]]:
        ...


    @abstractmethod
    def update( self ) -> Optional[float]:
        ...


    @abstractmethod
    def parameters( self ) -> Dict[str, np.ndarray]:
        ...


    def snapshot( self ) -> Dict[str, np.ndarray]:

        return {name: values.copy() for name, values in self.parameters().items()}
