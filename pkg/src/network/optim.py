#!/usr/bin/env python3

import numpy as np

from utils.error_handler import DimensionError


class Adam:

    # In-place Adam on a flat parameter vector

    def __init__( self, size: int, learning_rate: float, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8 ):

        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

        self.m = np.zeros(size, dtype=np.float64)
        self.v = np.zeros(size, dtype=np.float64)
        self.t = 0


    def step( self, params: np.ndarray, grad: np.ndarray ) -> None:

        if params.shape != self.m.shape or grad.shape != self.m.shape:
            raise DimensionError(f"optimizer sized {self.m.shape[0]}, got params {params.shape} / grad {grad.shape}")

        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad

        m_hat = self.m / (1.0 - self.beta1 ** self.t)
        v_hat = self.v / (1.0 - self.beta2 ** self.t)

        params -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)
