#!/usr/bin/env python3

from typing import Any, Dict, Tuple

import numpy as np
from scipy.stats import loguniform

from config.config_manager import AgentConfig, HpVariationConfig


def _log_uniform( bounds: Tuple[float, float], rng: np.random.Generator ) -> float:

    low, high = bounds

    if low == high:
        return float(low)

    return float(loguniform(low, high).rvs(random_state=rng))


class HpSampler:

    # learning rate, batch size and hidden size are log-uniform; hidden layer count is uniform


    def __init__( self, ranges: HpVariationConfig ):

        self.ranges = ranges


    def sample_learning_rate( self, rng: np.random.Generator ) -> float:

        return _log_uniform(self.ranges.learning_rate, rng)


    @staticmethod
    def _log_uniform_int( bounds: Tuple[int, int], rng: np.random.Generator ) -> int:

        low, high = bounds
        return int(np.clip(np.rint(_log_uniform(bounds, rng)), low, high))


    def sample( self, rng: np.random.Generator ) -> Dict[str, Any]:

        low_layers, high_layers = self.ranges.hidden_layers

        return {

            'learning_rate': self.sample_learning_rate(rng),
            'batch_size': self._log_uniform_int(self.ranges.batch_size, rng),
            'hidden_size': self._log_uniform_int(self.ranges.hidden_size, rng),
            'hidden_layers': int(rng.integers(low_layers, high_layers + 1))
        }


    def apply( self, config: AgentConfig, rng: np.random.Generator ) -> AgentConfig:

        return config.with_hps(**self.sample(rng))
