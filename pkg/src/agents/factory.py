#!/usr/bin/env python3

from typing import Dict, Type

import numpy as np

from config.config_manager import AgentConfig, AgentKind
from envs.types import TaskSpec
from utils.error_handler import ConfigurationError
from .base import Agent
from .ddqn import DDQNAgent, DuelingDDQNAgent
from .td3_discrete import DiscreteTD3Agent


AGENT_CLASSES: Dict[AgentKind, Type[Agent]] = {

    AgentKind.DDQN: DDQNAgent,
    AgentKind.DUELING_DDQN: DuelingDDQNAgent,
    AgentKind.DISCRETE_TD3: DiscreteTD3Agent
}


def create_agent( task: TaskSpec, config: AgentConfig, rng: np.random.Generator ) -> Agent:

    # Fresh, randomly initialized agent sized for the task

    problems = config.validate()

    if problems:
        raise ConfigurationError(f"Invalid agent configuration: {'; '.join(problems)}")

    agent_class = AGENT_CLASSES[AgentKind.parse(config.agent_kind)]
    return agent_class(task.obs_dim, task.n_actions, config, rng)
