#!/usr/bin/env python3

from .hp_sampler import HpSampler
from .suites import (

    REAL_ENV_ID,
    EvalRecord,
    AgentJob,
    record_seed,
    run_agent_job,
    suite_robustness,
    suite_transfer,
    suite_baseline,
    summarize
)
from .export import (

    EVALS_COLUMNS,
    RETURNS_COLUMNS,
    EVALS_SCHEMA_VERSION,
    evals_frame,
    returns_frame,
    write_results,
    baseline_mean_steps
)
from .histograms import (

    HISTOGRAM_COLUMNS,
    TupleSet,
    HistogramJob,
    collect_tuples,
    dimension_names,
    histogram_frame,
    render_svg,
    suite_histograms
)

__all__ = [

    'HpSampler',
    'REAL_ENV_ID',
    'EvalRecord',
    'AgentJob',
    'record_seed',
    'run_agent_job',
    'suite_robustness',
    'suite_transfer',
    'suite_baseline',
    'summarize',
    'EVALS_COLUMNS',
    'RETURNS_COLUMNS',
    'EVALS_SCHEMA_VERSION',
    'evals_frame',
    'returns_frame',
    'write_results',
    'baseline_mean_steps',
    'HISTOGRAM_COLUMNS',
    'TupleSet',
    'HistogramJob',
    'collect_tuples',
    'dimension_names',
    'histogram_frame',
    'render_svg',
    'suite_histograms'
]
