#!/usr/bin/env python3

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from envs.types import Transition
from utils.error_handler import AgentError


@dataclass
class TransitionBatch:

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray
    soft_actions: Optional[np.ndarray] = None


    def __len__( self ) -> int:

        return self.states.shape[0]


class ReplayBuffer:

    # Fixed-capacity FIFO ring; uniform sampling with replacement

    def __init__( self, capacity: int, rng: np.random.Generator ):

        if capacity < 1:
            raise AgentError(f"replay buffer capacity must be >= 1, got {capacity}")

        self.capacity = capacity
        self.rng = rng

        self._size = 0
        self._next = 0

        self._states: Optional[np.ndarray] = None
        self._next_states: Optional[np.ndarray] = None
        self._soft_actions: Optional[np.ndarray] = None
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity, dtype=np.float64)
        self._terminals = np.zeros(capacity, dtype=np.float64)


    def __len__( self ) -> int:

        return self._size


    def _allocate( self, transition: Transition ) -> None:

        obs_dim = np.shape(transition.state)[0]
        self._states = np.zeros((self.capacity, obs_dim), dtype=np.float64)
        self._next_states = np.zeros((self.capacity, obs_dim), dtype=np.float64)

        if transition.soft_action is not None:
            self._soft_actions = np.zeros((self.capacity, np.shape(transition.soft_action)[0]), dtype=np.float64)


    def push( self, transition: Transition ) -> None:

        if self._states is None:
            self._allocate(transition)

        if (transition.soft_action is None) != (self._soft_actions is None):
            raise AgentError("replay buffer cannot mix transitions with and without soft actions")

        index = self._next

        self._states[index] = transition.state
        self._actions[index] = transition.action
        self._rewards[index] = transition.reward
        self._next_states[index] = transition.next_state
        self._terminals[index] = 1.0 if transition.terminal else 0.0

        if self._soft_actions is not None:
            self._soft_actions[index] = transition.soft_action

        self._next = (index + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)


    def sample( self, batch_size: int ) -> TransitionBatch:

        if self._size == 0:
            raise AgentError("cannot sample from an empty replay buffer")

        indices = self.rng.integers(0, self._size, size=batch_size)

        return TransitionBatch(

            states=self._states[indices],
            actions=self._actions[indices],
            rewards=self._rewards[indices],
            next_states=self._next_states[indices],
            terminals=self._terminals[indices],
            soft_actions=None if self._soft_actions is None else self._soft_actions[indices]
        )


    def transitions( self ) -> List[Transition]:

        # Stored items, oldest first

        oldest = (self._next - self._size) % self.capacity
        items = []

        for offset in range(self._size):

            index = (oldest + offset) % self.capacity

            items.append(Transition(

                state=self._states[index].copy(),
                action=int(self._actions[index]),
                reward=float(self._rewards[index]),
                next_state=self._next_states[index].copy(),
                terminal=bool(self._terminals[index]),
                soft_action=None if self._soft_actions is None else self._soft_actions[index].copy()
            ))

        return items
