#!/usr/bin/env python3

from .config_manager import (

    ConfigManager,
    AgentKind,
    ScoreTransform,
    AgentConfig,
    TaskConfig,
    SeConfig,
    NesConfig,
    TrainingConfig,
    HpVariationConfig,
    ExperimentConfig,
    RuntimeConfig,
    LoggingConfig,
    THREADS_ENV_VAR,
    default_worker_count
)

__all__ = [

    'ConfigManager',
    'AgentKind',
    'ScoreTransform',
    'AgentConfig',
    'TaskConfig',
    'SeConfig',
    'NesConfig',
    'TrainingConfig',
    'HpVariationConfig',
    'ExperimentConfig',
    'RuntimeConfig',
    'LoggingConfig',
    'THREADS_ENV_VAR',
    'default_worker_count'
]
