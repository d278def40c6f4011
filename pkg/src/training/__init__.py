#!/usr/bin/env python3

from .heuristics import StopHeuristicState, se_stop_check, real_stop_check
from .trainer import (

    StopCause,
    TrainReport,
    train_agent,
    evaluate_agent,
    evaluate_agent_episodes
)

__all__ = [

    'StopHeuristicState',
    'se_stop_check',
    'real_stop_check',
    'StopCause',
    'TrainReport',
    'train_agent',
    'evaluate_agent',
    'evaluate_agent_episodes'
]
