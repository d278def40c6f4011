#!/usr/bin/env python3

from .mlp import (

    Activation,
    MlpArchitecture,
    FlatParams,
    GradientBuffer,
    ForwardCache,
    Mlp,
    forward,
    forward_with_cache,
    backward,
    perturb,
    init_params,
    flatten,
    unflatten,
    check_params
)
from .optim import Adam

__all__ = [

    'Activation',
    'MlpArchitecture',
    'FlatParams',
    'GradientBuffer',
    'ForwardCache',
    'Mlp',
    'forward',
    'forward_with_cache',
    'backward',
    'perturb',
    'init_params',
    'flatten',
    'unflatten',
    'check_params',
    'Adam'
]
