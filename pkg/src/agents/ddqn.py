#!/usr/bin/env python3

from typing import Dict, Optional, Tuple

import numpy as np

from config.config_manager import AgentConfig, AgentKind
from network.mlp import GradientBuffer, Mlp, MlpArchitecture
from network.optim import Adam
from utils.error_handler import AgentError
from .base import Agent, QNetworkPair, epsilon_schedule
from .replay_buffer import ReplayBuffer


def q_architecture( obs_dim: int, output_dim: int, config: AgentConfig ) -> MlpArchitecture:

    return MlpArchitecture(

        input_dim=obs_dim,
        output_dim=output_dim,
        hidden_sizes=(config.hidden_size,) * config.hidden_layers,
        activation=config.activation
    )


class QNetwork:

    # Q(s, .) for all actions from one MLP


    def __init__( self, mlp: Mlp, n_actions: int ):

        self.mlp = mlp
        self.n_actions = n_actions


    @classmethod
    def build( cls, obs_dim: int, n_actions: int, config: AgentConfig, rng: np.random.Generator ) -> "QNetwork":

        return cls(Mlp(q_architecture(obs_dim, n_actions, config), rng=rng), n_actions)


    @property
    def params( self ) -> np.ndarray:

        return self.mlp.params


    def q_values( self, states: np.ndarray ) -> np.ndarray:

        return self.mlp.predict(states)


    def q_values_train( self, states: np.ndarray ) -> np.ndarray:

        return self.mlp.forward(states)


    def backward( self, grad_q: np.ndarray ) -> GradientBuffer:

        return self.mlp.backward(grad_q)[0]


    def copy( self ) -> "QNetwork":

        return type(self)(self.mlp.copy(), self.n_actions)


def dueling_aggregate( value: np.ndarray, advantages: np.ndarray ) -> np.ndarray:

    # Q = V + A - mean(A)

    value = np.asarray(value, dtype=np.float64)
    advantages = np.asarray(advantages, dtype=np.float64)

    return value[..., None] + advantages - advantages.mean(axis=-1, keepdims=True)


def dueling_forward( network: "DuelingQNetwork", states: np.ndarray ) -> np.ndarray:

    return network.q_values(states)


class DuelingQNetwork(QNetwork):

    # Shared hidden layers; linear heads for V (first output) and A (remaining outputs)


    @classmethod
    def build( cls, obs_dim: int, n_actions: int, config: AgentConfig, rng: np.random.Generator ) -> "DuelingQNetwork":

        return cls(Mlp(q_architecture(obs_dim, 1 + n_actions, config), rng=rng), n_actions)


    @staticmethod
    def _aggregate( streams: np.ndarray ) -> np.ndarray:

        return dueling_aggregate(streams[..., 0], streams[..., 1:])


    def q_values( self, states: np.ndarray ) -> np.ndarray:

        return self._aggregate(self.mlp.predict(states))


    def q_values_train( self, states: np.ndarray ) -> np.ndarray:

        return self._aggregate(self.mlp.forward(states))


    def backward( self, grad_q: np.ndarray ) -> GradientBuffer:

        grad_value = grad_q.sum(axis=-1, keepdims=True)
        grad_advantages = grad_q - grad_q.mean(axis=-1, keepdims=True)

        return self.mlp.backward(np.concatenate([grad_value, grad_advantages], axis=-1))[0]


def ddqn_act( net: QNetworkPair, state: np.ndarray, eps: float, rng: np.random.Generator ) -> int:

    # epsilon-greedy on the online network; ties go to the lowest index

    if not 0.0 <= eps <= 1.0:
        raise AgentError(f"epsilon must be in [0, 1], got {eps}")

    if eps > 0.0 and rng.random() < eps:
        return int(rng.integers(net.online.n_actions))

    return int(np.argmax(net.online.q_values(state)))


def ddqn_train_step( net: QNetworkPair, buffer: ReplayBuffer, config: AgentConfig, optimizer: Adam ) -> Optional[float]:

    # Returns the pre-step TD loss, or None while the buffer holds fewer than batch_size items

    if len(buffer) < config.batch_size:
        return None

    batch = buffer.sample(config.batch_size)
    rows = np.arange(len(batch))

    best_next = np.argmax(net.online.q_values(batch.next_states), axis=1)
    next_values = net.target.q_values(batch.next_states)[rows, best_next]
    targets = batch.rewards + config.discount * (1.0 - batch.terminals) * next_values

    q_values = net.online.q_values_train(batch.states)
    errors = q_values[rows, batch.actions] - targets
    loss = float(np.mean(errors ** 2))

    grad_q = np.zeros_like(q_values)
    grad_q[rows, batch.actions] = 2.0 * errors / len(batch)

    grad = net.online.backward(grad_q)
    optimizer.step(net.online.params, grad.values)
    net.soft_update(config.target_update_rate)

    return loss


class DDQNAgent(Agent):

    kind = AgentKind.DDQN
    network_class = QNetwork


    def __init__( self, obs_dim: int, n_actions: int, config: AgentConfig, rng: np.random.Generator ):

        super().__init__(obs_dim, n_actions, config, rng)

        network = self.network_class.build(obs_dim, n_actions, config, rng)
        self.net = QNetworkPair.create(network)
        self.optimizer = Adam(network.params.shape[0], config.learning_rate)
        self.epsilon = config.eps_init


    def begin_episode( self, episode_index: int ) -> None:

        super().begin_episode(episode_index)
        self.epsilon = epsilon_schedule(self.config, episode_index)


    def greedy_action( self, state: np.ndarray ) -> int:

        return ddqn_act(self.net, state, 0.0, self.rng)


    def _explore_action( self, state: np.ndarray ) -> Tuple[int, Optional[np.ndarray]]:

        return ddqn_act(self.net, state, self.epsilon, self.rng), None


    def update( self ) -> Optional[float]:

        return ddqn_train_step(self.net, self.buffer, self.config, self.optimizer)


    def parameters( self ) -> Dict[str, np.ndarray]:

        return {'online': self.net.online.params, 'target': self.net.target.params}


class DuelingDDQNAgent(DDQNAgent):

    kind = AgentKind.DUELING_DDQN
    network_class = DuelingQNetwork
