#!/usr/bin/env python3
"""
Dense feed-forward networks over flat float64 parameter vectors.

The flat layout is what NES perturbs: for every layer the row-major weight
matrix of shape (fan_in, fan_out) followed by its bias, and, for PReLU
networks, one learned slope per hidden layer appended at the very end.
The output layer is always linear.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.error_handler import BackwardStateError, ConfigurationError, DimensionError, NumericalError


LEAKY_RELU_SLOPE = 0.01
PRELU_INIT_SLOPE = 0.25
MAX_HIDDEN_LAYERS = 3

# A flat vector of float64 values; the NES genotype
FlatParams = np.ndarray


class Activation(str, Enum):

    TANH = "tanh"
    RELU = "relu"
    LEAKY_RELU = "leaky_relu"
    PRELU = "prelu"


    @classmethod
    def parse( cls, value: Any ) -> "Activation":

        if isinstance(value, Activation):
            return value

        aliases = {

            'tanh': cls.TANH,
            'relu': cls.RELU,
            'lrelu': cls.LEAKY_RELU,
            'leakyrelu': cls.LEAKY_RELU,
            'leaky_relu': cls.LEAKY_RELU,
            'prelu': cls.PRELU
        }

        key = str(value).strip().lower().replace('-', '_')

        if key not in aliases:
            raise ConfigurationError(f"Unknown activation: {value}. Use one of Tanh, ReLU, LReLU, PReLU")

        return aliases[key]


@dataclass(frozen=True)
class MlpArchitecture:

    input_dim: int
    output_dim: int
    hidden_sizes: Tuple[int, ...]
    activation: Activation = Activation.RELU


    def __post_init__( self ) -> None:

        object.__setattr__(self, 'hidden_sizes', tuple(int(h) for h in self.hidden_sizes))
        object.__setattr__(self, 'activation', Activation.parse(self.activation))

        if self.input_dim < 1 or self.output_dim < 1:
            raise DimensionError(f"input/output dims must be >= 1, got {self.input_dim}/{self.output_dim}")

        if not 1 <= len(self.hidden_sizes) <= MAX_HIDDEN_LAYERS:
            raise DimensionError(f"between 1 and {MAX_HIDDEN_LAYERS} hidden layers required, got {len(self.hidden_sizes)}")

        for index, size in enumerate(self.hidden_sizes):
            if size < 1:
                raise DimensionError(f"hidden size must be >= 1, got {size}", layer=index)


    @property
    def layer_shapes( self ) -> List[Tuple[int, int]]:

        sizes = [self.input_dim, *self.hidden_sizes, self.output_dim]
        return list(zip(sizes[:-1], sizes[1:]))


    @property
    def n_layers( self ) -> int:

        return len(self.hidden_sizes) + 1


    @property
    def n_slopes( self ) -> int:

        return len(self.hidden_sizes) if self.activation is Activation.PRELU else 0


    @property
    def param_count( self ) -> int:

        return sum((fan_in + 1) * fan_out for fan_in, fan_out in self.layer_shapes) + self.n_slopes


    def to_dict( self ) -> Dict[str, Any]:

        return {

            'input_dim': self.input_dim,
            'output_dim': self.output_dim,
            'hidden_sizes': list(self.hidden_sizes),
            'activation': self.activation.value
        }


    @classmethod
    def from_dict( cls, data: Dict[str, Any] ) -> "MlpArchitecture":

        return cls(

            input_dim=int(data['input_dim']),
            output_dim=int(data['output_dim']),
            hidden_sizes=tuple(data['hidden_sizes']),
            activation=Activation.parse(data['activation'])
        )


@lru_cache(maxsize=None)
def _layout( arch: MlpArchitecture ) -> Tuple[Tuple[Tuple[int, int, int, int], ...], Tuple[int, int]]:

    # (weight_start, weight_end, bias_end, fan_out) per layer and the slope slice

    layers = []
    offset = 0

    for fan_in, fan_out in arch.layer_shapes:

        weight_end = offset + fan_in * fan_out
        bias_end = weight_end + fan_out
        layers.append((offset, weight_end, bias_end, fan_out))
        offset = bias_end

    return tuple(layers), (offset, offset + arch.n_slopes)


def check_params( arch: MlpArchitecture, params: np.ndarray ) -> None:

    if params.ndim != 1 or params.shape[0] != arch.param_count:
        raise DimensionError(f"expected {arch.param_count} parameters, got shape {params.shape}")


def unflatten( arch: MlpArchitecture, params: FlatParams ) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:

    # Views into params; writing through them writes the flat vector

    check_params(arch, params)
    layers, (slope_start, slope_end) = _layout(arch)

    weights = []
    biases = []

    for (start, weight_end, bias_end, fan_out), (fan_in, _) in zip(layers, arch.layer_shapes):

        weights.append(params[start:weight_end].reshape(fan_in, fan_out))
        biases.append(params[weight_end:bias_end])

    return weights, biases, params[slope_start:slope_end]


def flatten( weights: Sequence[np.ndarray], biases: Sequence[np.ndarray], slopes: Optional[Sequence[float]] = None ) -> FlatParams:

    chunks = []

    for weight, bias in zip(weights, biases):

        chunks.append(np.asarray(weight, dtype=np.float64).ravel())
        chunks.append(np.asarray(bias, dtype=np.float64).ravel())

    if slopes is not None:
        chunks.append(np.asarray(slopes, dtype=np.float64).ravel())

    return np.concatenate(chunks)


def init_params( arch: MlpArchitecture, rng: np.random.Generator ) -> FlatParams:

    # U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases, PReLU slopes at 0.25

    params = np.empty(arch.param_count, dtype=np.float64)
    weights, biases, slopes = unflatten(arch, params)

    for weight, bias in zip(weights, biases):

        bound = 1.0 / np.sqrt(weight.shape[0])
        weight[...] = rng.uniform(-bound, bound, size=weight.shape)
        bias[...] = rng.uniform(-bound, bound, size=bias.shape)

    slopes[...] = PRELU_INIT_SLOPE

    return params


def perturb( params: FlatParams, noise: FlatParams, sigma: float ) -> FlatParams:

    # noise is standard normal; sigma is applied here

    if params.shape != noise.shape:
        raise DimensionError(f"params {params.shape} and noise {noise.shape} differ in length")

    return params + sigma * noise


def _activate( z: np.ndarray, activation: Activation, slope: float ) -> np.ndarray:

    if activation is Activation.TANH:
        return np.tanh(z)

    if activation is Activation.RELU:
        return np.maximum(z, 0.0)

    if activation is Activation.LEAKY_RELU:
        return np.where(z > 0.0, z, LEAKY_RELU_SLOPE * z)

    return np.where(z > 0.0, z, slope * z)


def _activation_derivative( z: np.ndarray, h: np.ndarray, activation: Activation, slope: float ) -> np.ndarray:

    if activation is Activation.TANH:
        return 1.0 - h * h

    if activation is Activation.RELU:
        return (z > 0.0).astype(np.float64)

    if activation is Activation.LEAKY_RELU:
        return np.where(z > 0.0, 1.0, LEAKY_RELU_SLOPE)

    return np.where(z > 0.0, 1.0, slope)


@dataclass
class ForwardCache:

    # activations[i] is the input of layer i; pre_activations[i] the hidden pre-activation of layer i

    activations: List[np.ndarray] = field(default_factory=list)
    pre_activations: List[np.ndarray] = field(default_factory=list)
    single: bool = False


class GradientBuffer:

    # Accumulates dL/dtheta in the FlatParams layout of one architecture

    def __init__( self, arch: MlpArchitecture ):

        self.arch = arch
        self.values = np.zeros(arch.param_count, dtype=np.float64)


    def zero( self ) -> None:

        self.values.fill(0.0)


    def views( self ) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:

        return unflatten(self.arch, self.values)


    def check_finite( self ) -> None:

        if not np.all(np.isfinite(self.values)):
            raise NumericalError("non-finite value in gradient buffer")


def _as_batch( arch: MlpArchitecture, inputs: np.ndarray ) -> Tuple[np.ndarray, bool]:

    batch = np.asarray(inputs, dtype=np.float64)
    single = batch.ndim == 1

    if single:
        batch = batch[None, :]

    if batch.ndim != 2 or batch.shape[1] != arch.input_dim:
        raise DimensionError(f"expected input width {arch.input_dim}, got shape {np.shape(inputs)}", layer=0)

    return batch, single


def forward_with_cache( arch: MlpArchitecture, params: FlatParams, inputs: np.ndarray ) -> Tuple[np.ndarray, ForwardCache]:

    batch, single = _as_batch(arch, inputs)
    weights, biases, slopes = unflatten(arch, params)
    cache = ForwardCache(activations=[batch], single=single)

    hidden = batch
    last = arch.n_layers - 1

    for index, (weight, bias) in enumerate(zip(weights, biases)):

        z = hidden @ weight + bias

        if index == last:
            hidden = z
            break

        slope = slopes[index] if arch.n_slopes else 0.0
        hidden = _activate(z, arch.activation, slope)
        cache.pre_activations.append(z)
        cache.activations.append(hidden)

    return (hidden[0] if single else hidden), cache


def forward( arch: MlpArchitecture, params: FlatParams, inputs: np.ndarray ) -> np.ndarray:

    output, _ = forward_with_cache(arch, params, inputs)
    return output


def backward( arch: MlpArchitecture, params: FlatParams, cache: Optional[ForwardCache], upstream_grad: np.ndarray ) -> Tuple[GradientBuffer, np.ndarray]:

    # Gradient of sum(upstream_grad * output) w.r.t. params (summed over the batch) and w.r.t. the input

    if cache is None or not cache.activations:
        raise BackwardStateError("backward called without a cached forward pass")

    delta = np.asarray(upstream_grad, dtype=np.float64)

    if cache.single and delta.ndim == 1:
        delta = delta[None, :]

    expected = (cache.activations[0].shape[0], arch.output_dim)

    if delta.shape != expected:
        raise DimensionError(f"upstream gradient shape {delta.shape}, expected {expected}", layer=arch.n_layers - 1)

    weights, _, slopes = unflatten(arch, params)
    grad = GradientBuffer(arch)
    grad_weights, grad_biases, grad_slopes = grad.views()

    grad_input = delta

    for index in reversed(range(arch.n_layers)):

        layer_input = cache.activations[index]
        grad_weights[index][...] = layer_input.T @ delta
        grad_biases[index][...] = delta.sum(axis=0)
        upstream = delta @ weights[index].T

        if index == 0:
            grad_input = upstream
            break

        z = cache.pre_activations[index - 1]
        slope = slopes[index - 1] if arch.n_slopes else 0.0

        if arch.n_slopes:
            grad_slopes[index - 1] = np.sum(upstream * np.minimum(z, 0.0))

        delta = upstream * _activation_derivative(z, layer_input, arch.activation, slope)

    grad.check_finite()

    return grad, (grad_input[0] if cache.single else grad_input)


class Mlp:

    # Network bound to its own parameter vector; forward() caches for backward()

    def __init__( self, arch: MlpArchitecture, params: Optional[FlatParams] = None, rng: Optional[np.random.Generator] = None ):

        self.arch = arch

        if params is None:
            params = init_params(arch, rng if rng is not None else np.random.default_rng())

        params = np.asarray(params, dtype=np.float64)
        check_params(arch, params)

        self.params = params.copy()
        self._cache: Optional[ForwardCache] = None


    def forward( self, inputs: np.ndarray ) -> np.ndarray:

        output, self._cache = forward_with_cache(self.arch, self.params, inputs)
        return output


    def predict( self, inputs: np.ndarray ) -> np.ndarray:

        return forward(self.arch, self.params, inputs)


    def backward( self, upstream_grad: np.ndarray ) -> Tuple[GradientBuffer, np.ndarray]:

        cache, self._cache = self._cache, None
        return backward(self.arch, self.params, cache, upstream_grad)


    def copy( self ) -> "Mlp":

        return Mlp(self.arch, self.params)
