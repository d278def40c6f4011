#!/usr/bin/env python3

import traceback
from typing import Optional, Callable, Any
from .logger import Logger


class SEForgeError(Exception):
    # Base class for SEForge errors
    pass


class ConfigurationError(SEForgeError):
    # Configuration related errors
    pass


class DimensionError(SEForgeError):

    # Shape mismatch between a network, its parameters or its inputs

    def __init__( self, message: str, layer: Optional[int] = None ):

        self.layer = layer
        prefix = f"layer {layer}: " if layer is not None else ""
        super().__init__(f"{prefix}{message}")


class BackwardStateError(SEForgeError):
    # backward() without a cached forward pass
    pass


class NumericalError(SEForgeError):
    # NaN/Inf in gradients or parameters
    pass


class EpisodeDoneError(SEForgeError):
    # Stepping an environment whose episode already ended
    pass


class CheckpointError(SEForgeError):
    # Synthetic environment checkpoint errors
    pass


class CheckpointSchemaError(CheckpointError):
    # Corrupt, truncated or wrong-version checkpoint file
    pass


class TaskMismatchError(CheckpointError):
    # Checkpoint does not belong to the requested task
    pass


class AgentError(SEForgeError):
    # Agent construction / update errors
    pass


class NesError(SEForgeError):
    # Outer loop errors
    pass


class ExperimentError(SEForgeError):
    # Evaluation suite errors
    pass


class VerificationError(SEForgeError):
    # Oracle check failures reported by `verify`
    pass


class ErrorHandler:

    def __init__( self, logger: Logger ):

        self.logger = logger
        self.error_count = 0
        self.last_error: Optional[Exception] = None


    def handle_error( self, error: Exception, context: str = "" ) -> None:

        self.error_count += 1
        self.last_error = error

        error_msg = f"[x] Error in {context}: {str(error)}" if context else f"[x] Error: {str(error)}"

        self.logger.error(error_msg)
        self.logger.debug(f"[!] Stack trace: {traceback.format_exc()}")


def safe_execute( func: Callable, logger: Optional[Logger], context: str = "", default_return: Any = None ) -> Any:

    try:

        return func()

    except Exception as e:

        if logger:
            ErrorHandler(logger).handle_error(e, context)

        return default_return
