#!/usr/bin/env python3

import json
from pathlib import Path
from typing import Any, Dict, List, Sequence

import pandas as pd

from utils.error_handler import ExperimentError
from .suites import EvalRecord


EVALS_SCHEMA_VERSION = 1

EVALS_COLUMNS = [

    'se_id',
    'agent_kind',
    'lr',
    'batch',
    'hidden',
    'layers',
    'mean_return',
    'std_return',
    'episodes',
    'steps',
    'eval_steps',
    'schema_version'
]

RETURNS_COLUMNS = ['se_id', 'agent_index', 'episode', 'return']


def evals_frame( records: Sequence[EvalRecord] ) -> pd.DataFrame:

    rows = [

        {
            'se_id': record.se_id,
            'agent_kind': record.agent_kind,
            'lr': record.learning_rate,
            'batch': record.batch_size,
            'hidden': record.hidden_size,
            'layers': record.hidden_layers,
            'mean_return': record.mean_return,
            'std_return': record.std_return,
            'episodes': record.episodes,
            'steps': record.steps,
            'eval_steps': record.eval_steps,
            'schema_version': EVALS_SCHEMA_VERSION
        }
        for record in records
    ]

    return pd.DataFrame(rows, columns=EVALS_COLUMNS)


def returns_frame( records: Sequence[EvalRecord] ) -> pd.DataFrame:

    # One row per test episode, for external violin plots

    rows = [

        {'se_id': record.se_id, 'agent_index': record.agent_index, 'episode': episode, 'return': value}
        for record in records
        for episode, value in enumerate(record.returns)
    ]

    return pd.DataFrame(rows, columns=RETURNS_COLUMNS)


def write_results( records: Sequence[EvalRecord], summary: Dict[str, Any], out_dir: Path ) -> List[Path]:

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    evals_path = out_dir / "evals.csv"
    returns_path = out_dir / "returns.csv"
    summary_path = out_dir / "summary.json"

    evals_frame(records).to_csv(evals_path, index=False)
    returns_frame(records).to_csv(returns_path, index=False)

    with summary_path.open('w', encoding='utf-8') as f:
        json.dump({'schema_version': EVALS_SCHEMA_VERSION, **summary}, f, indent=2)

    return [evals_path, returns_path, summary_path]


def baseline_mean_steps( baseline_dir: Path ) -> float:

    # Mean training steps of a previous baseline run, read back from its evals.csv

    path = Path(baseline_dir) / "evals.csv"

    if not path.exists():
        raise ExperimentError(f"baseline results not found: {path}")

    frame = pd.read_csv(path)

    if list(frame.columns) != EVALS_COLUMNS:
        raise ExperimentError(f"unexpected evals.csv columns in {path}: {list(frame.columns)}")

    versions = sorted(set(frame['schema_version']))

    if versions and versions != [EVALS_SCHEMA_VERSION]:
        raise ExperimentError(f"evals.csv in {path} has schema version(s) {versions}, expected {EVALS_SCHEMA_VERSION}")

    if frame.empty:
        raise ExperimentError(f"baseline results are empty: {path}")

    return float(frame['steps'].mean())
