#!/usr/bin/env python3
"""
NES population math: mirrored noise sampling, score transforms and the
weighted-sum parameter update. Noise is stored unscaled; sigma enters at
perturbation time and in the update's normalization.
"""

import numpy as np
from scipy.stats import rankdata

from config.config_manager import NesConfig, ScoreTransform
from network.mlp import FlatParams
from utils.error_handler import DimensionError, NesError


def sample_noises( config: NesConfig, size: int, rng: np.random.Generator ) -> np.ndarray:

    # Rows are population members; with mirroring row i + n_p/2 is -row i

    n_p = config.population_size

    if not config.mirrored:
        return rng.standard_normal((n_p, size))

    if n_p % 2:
        raise NesError(f"mirrored sampling needs an even population, got {n_p}")

    half = rng.standard_normal((n_p // 2, size))
    return np.concatenate([half, -half], axis=0)


def _better_average( raw: np.ndarray ) -> np.ndarray:

    mean = raw.mean()
    best = raw.max()
    transformed = np.zeros_like(raw)

    if best <= mean:
        return transformed

    above = raw > mean
    transformed[above] = (raw[above] - mean) / (best - mean)
    return transformed


def _rank_linear( raw: np.ndarray ) -> np.ndarray:

    # Ties share their average rank; worst -> 0, best -> 1
    ranks = rankdata(raw, method='average') - 1.0
    return ranks / (raw.shape[0] - 1)


def _min_max( raw: np.ndarray ) -> np.ndarray:

    spread = raw.max() - raw.min()

    if spread == 0:
        return np.zeros_like(raw)

    return (raw - raw.min()) / spread


_TRANSFORMS = {

    ScoreTransform.BETTER_AVERAGE: _better_average,
    ScoreTransform.RANK_LINEAR: _rank_linear,
    ScoreTransform.RAW: _min_max
}


def transform_scores( raw, transform: ScoreTransform = ScoreTransform.BETTER_AVERAGE ) -> np.ndarray:

    raw = np.asarray(raw, dtype=np.float64)

    if raw.ndim != 1 or raw.shape[0] < 2:
        raise NesError(f"score transform needs at least 2 scores, got shape {raw.shape}")

    if not np.all(np.isfinite(raw)):
        raise NesError("population scores contain NaN/Inf")

    return _TRANSFORMS[ScoreTransform.parse(transform)](raw)


def update_se( psi: FlatParams, noises: np.ndarray, transformed_scores: np.ndarray, config: NesConfig ) -> FlatParams:

    # psi + step_size / (n_p * sigma) * sum_i F_i * eps_i

    noises = np.asarray(noises, dtype=np.float64)
    weights = np.asarray(transformed_scores, dtype=np.float64)

    if noises.ndim != 2 or noises.shape[1] != psi.shape[0]:
        raise DimensionError(f"noise matrix shape {noises.shape} does not match parameter length {psi.shape[0]}")

    if weights.shape != (noises.shape[0],):
        raise DimensionError(f"expected {noises.shape[0]} transformed scores, got shape {weights.shape}")

    n_p = noises.shape[0]
    return psi + (config.step_size / (n_p * config.std_dev)) * (weights @ noises)
