#!/usr/bin/env python3

from .environment import (

    SeMeta,
    SyntheticEnvSpec,
    SyntheticEnvironment,
    se_architecture,
    build_se_spec,
    one_hot,
    se_step,
    se_episode
)
from .checkpoint import save_se, load_se, SCHEMA_VERSION

__all__ = [

    'SeMeta',
    'SyntheticEnvSpec',
    'SyntheticEnvironment',
    'se_architecture',
    'build_se_spec',
    'one_hot',
    'se_step',
    'se_episode',
    'save_se',
    'load_se',
    'SCHEMA_VERSION'
]
