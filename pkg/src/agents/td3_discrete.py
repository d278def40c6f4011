#!/usr/bin/env python3
"""
TD3 adapted to discrete actions.

The actor outputs logits; a Gumbel-Softmax relaxation with a learned
temperature (kept in log-space) turns them into a differentiable soft action.
Twin critics score concat(state, soft_action) and the actor ascends the first
critic through the soft action every `policy_delay` critic updates.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import softmax

from config.config_manager import AgentConfig, AgentKind
from network.mlp import GradientBuffer, Mlp, MlpArchitecture
from network.optim import Adam
from utils.error_handler import AgentError
from .base import Agent, QNetworkPair
from .replay_buffer import ReplayBuffer


def gumbel_softmax( logits: np.ndarray, temperature: float, gumbel_noise: np.ndarray ) -> np.ndarray:

    return softmax((logits + gumbel_noise) / temperature, axis=-1)


def td3d_act( actor: Mlp, state: np.ndarray, temperature: float, rng: np.random.Generator, mode: str = "sample" ) -> Tuple[int, np.ndarray]:

    if not temperature > 0:
        raise AgentError(f"Gumbel-Softmax temperature must be positive, got {temperature}")

    logits = actor.predict(state)

    if mode == "greedy":
        return int(np.argmax(logits)), softmax(logits / temperature, axis=-1)

    if mode != "sample":
        raise AgentError(f"mode must be 'sample' or 'greedy', got {mode}")

    soft_action = gumbel_softmax(logits, temperature, rng.gumbel(size=logits.shape))

    return int(np.argmax(soft_action)), soft_action


class CriticNetwork:

    # Q(s, soft_action) -> scalar


    def __init__( self, mlp: Mlp, obs_dim: int ):

        self.mlp = mlp
        self.obs_dim = obs_dim


    @classmethod
    def build( cls, obs_dim: int, n_actions: int, config: AgentConfig, rng: np.random.Generator ) -> "CriticNetwork":

        arch = MlpArchitecture(

            input_dim=obs_dim + n_actions,
            output_dim=1,
            hidden_sizes=(config.hidden_size,) * config.hidden_layers,
            activation=config.activation
        )

        return cls(Mlp(arch, rng=rng), obs_dim)


    @property
    def params( self ) -> np.ndarray:

        return self.mlp.params


    def value( self, states: np.ndarray, soft_actions: np.ndarray ) -> np.ndarray:

        return self.mlp.predict(np.concatenate([states, soft_actions], axis=-1))[..., 0]


    def value_train( self, states: np.ndarray, soft_actions: np.ndarray ) -> np.ndarray:

        return self.mlp.forward(np.concatenate([states, soft_actions], axis=-1))[..., 0]


    def backward( self, grad_value: np.ndarray ) -> Tuple[GradientBuffer, np.ndarray]:

        # Returns the parameter gradient and the gradient w.r.t. the soft action

        grad, grad_input = self.mlp.backward(grad_value[..., None])
        return grad, grad_input[..., self.obs_dim:]


    def copy( self ) -> "CriticNetwork":

        return CriticNetwork(self.mlp.copy(), self.obs_dim)


@dataclass
class Td3Networks:

    actor: QNetworkPair
    critics: List[QNetworkPair]
    log_temperature: np.ndarray
    actor_optimizer: Adam
    temperature_optimizer: Adam
    critic_optimizers: List[Adam]


    @property
    def temperature( self ) -> float:

        return float(np.exp(self.log_temperature[0]))


def actor_objective( actor: Mlp, log_temperature: float, critic: CriticNetwork, states: np.ndarray, gumbel_noise: np.ndarray ) -> Tuple[float, GradientBuffer, float]:

    # loss = -mean Q1(s, gumbel_softmax(actor(s))); gradients w.r.t. actor params and log temperature

    batch_size = states.shape[0]
    temperature = np.exp(log_temperature)

    logits = actor.forward(states)
    z = (logits + gumbel_noise) / temperature
    soft_actions = softmax(z, axis=-1)

    values = critic.value_train(states, soft_actions)
    loss = float(-np.mean(values))

    _, grad_soft = critic.backward(np.full(batch_size, -1.0 / batch_size))

    grad_z = soft_actions * (grad_soft - np.sum(grad_soft * soft_actions, axis=-1, keepdims=True))
    grad_actor, _ = actor.backward(grad_z / temperature)

    # dz/dlog_temperature = -z
    grad_log_temperature = float(np.sum(grad_z * -z))

    return loss, grad_actor, grad_log_temperature


def td3d_train_step( nets: Td3Networks, buffer: ReplayBuffer, config: AgentConfig, step_index: int, rng: np.random.Generator ) -> Optional[Tuple[float, Optional[float]]]:

    if len(buffer) < config.batch_size:
        return None

    batch = buffer.sample(config.batch_size)
    batch_size = len(batch)
    n_actions = nets.actor.online.arch.output_dim
    temperature = nets.temperature

    if batch.soft_actions is not None:
        actions = batch.soft_actions
    else:
        actions = np.eye(n_actions)[batch.actions]

    next_logits = nets.actor.target.predict(batch.next_states)
    next_actions = gumbel_softmax(next_logits, temperature, rng.gumbel(size=next_logits.shape))

    next_values = np.minimum(

        nets.critics[0].target.value(batch.next_states, next_actions),
        nets.critics[1].target.value(batch.next_states, next_actions)
    )
    targets = batch.rewards + config.discount * (1.0 - batch.terminals) * next_values

    critic_loss = 0.0

    for pair, optimizer in zip(nets.critics, nets.critic_optimizers):

        errors = pair.online.value_train(batch.states, actions) - targets
        critic_loss += float(np.mean(errors ** 2))

        grad, _ = pair.online.backward(2.0 * errors / batch_size)
        optimizer.step(pair.online.params, grad.values)

    if step_index % config.policy_delay:
        return critic_loss, None

    actor_loss, grad_actor, grad_log_temperature = actor_objective(

        nets.actor.online,
        float(nets.log_temperature[0]),
        nets.critics[0].online,
        batch.states,
        rng.gumbel(size=(batch_size, n_actions))
    )

    nets.actor_optimizer.step(nets.actor.online.params, grad_actor.values)
    nets.temperature_optimizer.step(nets.log_temperature, np.array([grad_log_temperature]))

    nets.actor.soft_update(config.target_update_rate)

    for pair in nets.critics:
        pair.soft_update(config.target_update_rate)

    return critic_loss, actor_loss


class DiscreteTD3Agent(Agent):

    kind = AgentKind.DISCRETE_TD3


    def __init__( self, obs_dim: int, n_actions: int, config: AgentConfig, rng: np.random.Generator ):

        super().__init__(obs_dim, n_actions, config, rng)

        actor_arch = MlpArchitecture(

            input_dim=obs_dim,
            output_dim=n_actions,
            hidden_sizes=(config.hidden_size,) * config.hidden_layers,
            activation=config.activation
        )

        actor = QNetworkPair.create(Mlp(actor_arch, rng=rng))
        critics = [QNetworkPair.create(CriticNetwork.build(obs_dim, n_actions, config, rng)) for _ in range(2)]

        self.nets = Td3Networks(

            actor=actor,
            critics=critics,
            log_temperature=np.array([np.log(config.gumbel_start_temperature)]),
            actor_optimizer=Adam(actor_arch.param_count, config.learning_rate),
            temperature_optimizer=Adam(1, config.learning_rate),
            critic_optimizers=[Adam(pair.online.params.shape[0], config.learning_rate) for pair in critics]
        )

        self.last_actor_loss: Optional[float] = None


    def _random_action( self ) -> Tuple[int, Optional[np.ndarray]]:

        action = int(self.rng.integers(self.n_actions))
        return action, np.eye(self.n_actions)[action]


    def greedy_action( self, state: np.ndarray ) -> int:

        return td3d_act(self.nets.actor.online, state, self.nets.temperature, self.rng, mode="greedy")[0]


    def _explore_action( self, state: np.ndarray ) -> Tuple[int, Optional[np.ndarray]]:

        return td3d_act(self.nets.actor.online, state, self.nets.temperature, self.rng, mode="sample")


    def update( self ) -> Optional[float]:

        result = td3d_train_step(self.nets, self.buffer, self.config, self.train_steps, self.rng)

        if result is None:
            return None

        critic_loss, actor_loss = result

        if actor_loss is not None:
            self.last_actor_loss = actor_loss

        return critic_loss


    def parameters( self ) -> Dict[str, np.ndarray]:

        params = {

            'actor': self.nets.actor.online.params,
            'actor_target': self.nets.actor.target.params,
            'log_temperature': self.nets.log_temperature
        }

        for index, pair in enumerate(self.nets.critics):

            params[f'critic_{index}'] = pair.online.params
            params[f'critic_{index}_target'] = pair.target.params

        return params
