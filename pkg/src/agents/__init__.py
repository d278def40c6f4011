#!/usr/bin/env python3

from .replay_buffer import ReplayBuffer, TransitionBatch
from .base import Agent, QNetworkPair, epsilon_schedule
from .ddqn import (

    QNetwork,
    DuelingQNetwork,
    DDQNAgent,
    DuelingDDQNAgent,
    dueling_aggregate,
    dueling_forward,
    ddqn_act,
    ddqn_train_step
)
from .td3_discrete import (

    CriticNetwork,
    Td3Networks,
    DiscreteTD3Agent,
    gumbel_softmax,
    td3d_act,
    td3d_train_step,
    actor_objective
)
from .factory import AGENT_CLASSES, create_agent

__all__ = [

    'ReplayBuffer',
    'TransitionBatch',
    'Agent',
    'QNetworkPair',
    'epsilon_schedule',
    'QNetwork',
    'DuelingQNetwork',
    'DDQNAgent',
    'DuelingDDQNAgent',
    'dueling_aggregate',
    'dueling_forward',
    'ddqn_act',
    'ddqn_train_step',
    'CriticNetwork',
    'Td3Networks',
    'DiscreteTD3Agent',
    'gumbel_softmax',
    'td3d_act',
    'td3d_train_step',
    'actor_objective',
    'AGENT_CLASSES',
    'create_agent'
]
