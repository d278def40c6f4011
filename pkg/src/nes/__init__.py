#!/usr/bin/env python3

from .strategy import sample_noises, transform_scores, update_se
from .run_log import RunLog
from .runner import (

    NesRunConfig,
    MemberTask,
    GenerationReport,
    NesResult,
    train_and_evaluate,
    evaluate_member,
    run_nes
)

__all__ = [

    'sample_noises',
    'transform_scores',
    'update_se',
    'RunLog',
    'NesRunConfig',
    'MemberTask',
    'GenerationReport',
    'NesResult',
    'train_and_evaluate',
    'evaluate_member',
    'run_nes'
]
