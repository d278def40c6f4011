#!/usr/bin/env python3

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from envs.types import TaskSpec
from utils.error_handler import ConfigurationError


ZERO_GUARD = 1e-8


@dataclass
class StopHeuristicState:

    returns: List[float] = field(default_factory=list)
    d: int = 10
    c_diff: float = 0.01


    def __post_init__( self ) -> None:

        if self.d < 1:
            raise ConfigurationError(f"early-out window d must be >= 1, got {self.d}")


    def record( self, cumulative_reward: float ) -> None:

        self.returns.append(float(cumulative_reward))


    @property
    def active( self ) -> bool:

        return len(self.returns) >= 2 * self.d


def se_stop_check( state: StopHeuristicState ) -> bool:

    # Compares the mean of the last d returns with the mean of the d returns before them

    if not state.active:
        return False

    d = state.d
    recent = float(np.mean(state.returns[-d:]))
    previous = float(np.mean(state.returns[-2 * d:-d]))

    if abs(previous) < ZERO_GUARD:
        return abs(recent) < ZERO_GUARD

    return abs(recent - previous) / abs(previous) <= state.c_diff


def real_stop_check( test_returns: Sequence[float], task: TaskSpec, d: int = 10 ) -> bool:

    if len(test_returns) < d:
        return False

    return float(np.mean(test_returns[-d:])) >= task.solved_reward
