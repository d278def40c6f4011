#!/usr/bin/env python3

from .logger import Logger
from .error_handler import (

    ErrorHandler,
    SEForgeError,
    ConfigurationError,
    DimensionError,
    BackwardStateError,
    NumericalError,
    EpisodeDoneError,
    CheckpointError,
    CheckpointSchemaError,
    TaskMismatchError,
    AgentError,
    NesError,
    ExperimentError,
    VerificationError,
    safe_execute
)
from .process_manager import ProcessManager, JobOutcome

__all__ = [

    'Logger',
    'ErrorHandler',
    'SEForgeError',
    'ConfigurationError',
    'DimensionError',
    'BackwardStateError',
    'NumericalError',
    'EpisodeDoneError',
    'CheckpointError',
    'CheckpointSchemaError',
    'TaskMismatchError',
    'AgentError',
    'NesError',
    'ExperimentError',
    'VerificationError',
    'safe_execute',
    'ProcessManager',
    'JobOutcome'
]
