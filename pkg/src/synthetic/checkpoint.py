#!/usr/bin/env python3

import json
from pathlib import Path
from typing import Optional, Union

import numpy as np

from envs.types import TaskSpec, get_task
from network.mlp import MlpArchitecture
from utils.error_handler import CheckpointError, CheckpointSchemaError, ConfigurationError, DimensionError, NumericalError, TaskMismatchError
from .environment import SeMeta, SyntheticEnvSpec


SCHEMA_VERSION = 1
REQUIRED_KEYS = ('schema_version', 'task', 'arch', 'params', 'meta')


def save_se( spec: SyntheticEnvSpec, path: Union[str, Path] ) -> Path:

    # Params as hex floats so the round-trip is bit-exact

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    payload = {

        'schema_version': SCHEMA_VERSION,
        'task': spec.task.to_dict(),
        'arch': spec.arch.to_dict(),
        'params': [float(value).hex() for value in spec.params],
        'meta': spec.meta.to_dict()
    }

    with path.open('w', encoding='utf-8') as f:
        json.dump(payload, f, indent=1)

    return path


def load_se( path: Union[str, Path], expected_task: Optional[TaskSpec] = None ) -> SyntheticEnvSpec:

    path = Path(path)

    try:

        with path.open('r', encoding='utf-8') as f:
            payload = json.load(f)

    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e

    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise CheckpointSchemaError(f"Corrupt checkpoint {path}: {e}") from e

    if not isinstance(payload, dict) or any(key not in payload for key in REQUIRED_KEYS):
        raise CheckpointSchemaError(f"Checkpoint {path} is missing required keys {REQUIRED_KEYS}")

    if payload['schema_version'] != SCHEMA_VERSION:
        raise CheckpointSchemaError(f"Checkpoint {path} has schema version {payload['schema_version']}, expected {SCHEMA_VERSION}")

    try:

        task = get_task(payload['task']['name'])
        arch = MlpArchitecture.from_dict(payload['arch'])
        params = np.array([float.fromhex(value) for value in payload['params']], dtype=np.float64)
        meta = SeMeta.from_dict(payload['meta'])

    except (KeyError, TypeError, ValueError, ConfigurationError, DimensionError) as e:
        raise CheckpointSchemaError(f"Malformed checkpoint {path}: {e}")

    if task.to_dict() != payload['task']:
        raise CheckpointSchemaError(f"Checkpoint {path} declares task fields {payload['task']} that differ from {task.name}")

    if expected_task is not None and expected_task.name != task.name:
        raise TaskMismatchError(f"Checkpoint {path} was trained for {task.name}, not {expected_task.name}")

    try:
        return SyntheticEnvSpec(task=task, arch=arch, params=params, meta=meta)

    except (DimensionError, NumericalError) as e:
        raise CheckpointSchemaError(f"Checkpoint {path} does not describe a valid SE: {e}")
