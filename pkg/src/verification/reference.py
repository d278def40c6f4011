#!/usr/bin/env python3
"""
Plain-Python transcriptions used as oracles: the classic-control CartPole and
Acrobot step functions written the way the canonical environments are, and a
loop-based MLP forward pass. Nothing here shares code with the optimized
implementations it checks.
"""

import math
from typing import List, Sequence, Tuple

from network.mlp import Activation, MlpArchitecture, LEAKY_RELU_SLOPE


class ReferenceCartPole:


    def __init__( self, state: Sequence[float] ):

        self.gravity = 9.8
        self.masscart = 1.0
        self.masspole = 0.1
        self.total_mass = self.masspole + self.masscart
        self.length = 0.5
        self.polemass_length = self.masspole * self.length
        self.force_mag = 10.0
        self.tau = 0.02
        self.theta_threshold_radians = 12 * 2 * math.pi / 360
        self.x_threshold = 2.4

        self.state = [float(v) for v in state]


    def step( self, action: int ) -> Tuple[List[float], float, bool]:

        x, x_dot, theta, theta_dot = self.state
        force = self.force_mag if action == 1 else -self.force_mag
        costheta = math.cos(theta)
        sintheta = math.sin(theta)

        temp = (force + self.polemass_length * theta_dot ** 2 * sintheta) / self.total_mass
        thetaacc = (self.gravity * sintheta - costheta * temp) / (self.length * (4.0 / 3.0 - self.masspole * costheta ** 2 / self.total_mass))
        xacc = temp - self.polemass_length * thetaacc * costheta / self.total_mass

        x = x + self.tau * x_dot
        x_dot = x_dot + self.tau * xacc
        theta = theta + self.tau * theta_dot
        theta_dot = theta_dot + self.tau * thetaacc
        self.state = [x, x_dot, theta, theta_dot]

        done = bool(

            x < -self.x_threshold
            or x > self.x_threshold
            or theta < -self.theta_threshold_radians
            or theta > self.theta_threshold_radians
        )

        return list(self.state), 1.0, done


class ReferenceAcrobot:

    dt = 0.2

    LINK_LENGTH_1 = 1.0
    LINK_MASS_1 = 1.0
    LINK_MASS_2 = 1.0
    LINK_COM_POS_1 = 0.5
    LINK_COM_POS_2 = 0.5
    LINK_MOI = 1.0

    MAX_VEL_1 = 4 * math.pi
    MAX_VEL_2 = 9 * math.pi

    AVAIL_TORQUE = [-1.0, 0.0, +1]


    def __init__( self, state: Sequence[float] ):

        self.state = [float(v) for v in state]


    def _get_ob( self ) -> List[float]:

        s = self.state
        return [math.cos(s[0]), math.sin(s[0]), math.cos(s[1]), math.sin(s[1]), s[2], s[3]]


    def _terminal( self ) -> bool:

        s = self.state
        return bool(-math.cos(s[0]) - math.cos(s[1] + s[0]) > 1.0)


    def _dsdt( self, s_augmented: List[float] ) -> List[float]:

        m1 = self.LINK_MASS_1
        m2 = self.LINK_MASS_2
        l1 = self.LINK_LENGTH_1
        lc1 = self.LINK_COM_POS_1
        lc2 = self.LINK_COM_POS_2
        I1 = self.LINK_MOI
        I2 = self.LINK_MOI
        g = 9.8
        a = s_augmented[-1]
        s = s_augmented[:-1]
        theta1 = s[0]
        theta2 = s[1]
        dtheta1 = s[2]
        dtheta2 = s[3]
        d1 = m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2 + 2 * l1 * lc2 * math.cos(theta2)) + I1 + I2
        d2 = m2 * (lc2 ** 2 + l1 * lc2 * math.cos(theta2)) + I2
        phi2 = m2 * lc2 * g * math.cos(theta1 + theta2 - math.pi / 2.0)
        phi1 = - m2 * l1 * lc2 * dtheta2 ** 2 * math.sin(theta2) \
               - 2 * m2 * l1 * lc2 * dtheta2 * dtheta1 * math.sin(theta2) \
            + (m1 * lc1 + m2 * l1) * g * math.cos(theta1 - math.pi / 2) + phi2
        ddtheta2 = (a + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 ** 2 * math.sin(theta2) - phi2) \
            / (m2 * lc2 ** 2 + I2 - d2 ** 2 / d1)
        ddtheta1 = -(d2 * ddtheta2 + phi1) / d1
        return [dtheta1, dtheta2, ddtheta1, ddtheta2, 0.0]


    def _rk4( self, y0: List[float] ) -> List[float]:

        dt = self.dt
        dt2 = dt / 2.0
        k1 = self._dsdt(y0)
        k2 = self._dsdt([y0[i] + dt2 * k1[i] for i in range(len(y0))])
        k3 = self._dsdt([y0[i] + dt2 * k2[i] for i in range(len(y0))])
        k4 = self._dsdt([y0[i] + dt * k3[i] for i in range(len(y0))])
        return [y0[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(len(y0))]


    @staticmethod
    def _wrap( x: float, m: float, M: float ) -> float:

        diff = M - m
        while x > M:
            x = x - diff
        while x < m:
            x = x + diff
        return x


    def step( self, action: int ) -> Tuple[List[float], float, bool]:

        torque = self.AVAIL_TORQUE[action]
        s_augmented = self.state + [torque]

        ns = self._rk4(s_augmented)[:4]

        ns[0] = self._wrap(ns[0], -math.pi, math.pi)
        ns[1] = self._wrap(ns[1], -math.pi, math.pi)
        ns[2] = min(max(ns[2], -self.MAX_VEL_1), self.MAX_VEL_1)
        ns[3] = min(max(ns[3], -self.MAX_VEL_2), self.MAX_VEL_2)
        self.state = ns

        terminal = self._terminal()
        reward = -1.0 if not terminal else 0.0

        return self._get_ob(), reward, terminal


def naive_forward( arch: MlpArchitecture, params: Sequence[float], inputs: Sequence[float] ) -> List[float]:

    # Walks the flat layout by hand: per layer W (row-major, fan_in x fan_out) then b; PReLU slopes last

    params = [float(p) for p in params]
    shapes = arch.layer_shapes
    offset = 0
    layers = []

    for fan_in, fan_out in shapes:

        weights = [[params[offset + i * fan_out + j] for j in range(fan_out)] for i in range(fan_in)]
        offset += fan_in * fan_out
        biases = params[offset:offset + fan_out]
        offset += fan_out
        layers.append((weights, biases))

    slopes = params[offset:]
    activations = [float(v) for v in inputs]

    for index, (weights, biases) in enumerate(layers):

        fan_in, fan_out = shapes[index]
        z = []

        for j in range(fan_out):

            total = biases[j]

            for i in range(fan_in):
                total += activations[i] * weights[i][j]

            z.append(total)

        if index == len(layers) - 1:
            return z

        activations = [_naive_activation(value, arch.activation, slopes[index] if slopes else 0.0) for value in z]

    return activations


def _naive_activation( value: float, activation: Activation, slope: float ) -> float:

    if activation is Activation.TANH:
        return math.tanh(value)

    if activation is Activation.RELU:
        return value if value > 0 else 0.0

    if activation is Activation.LEAKY_RELU:
        return value if value > 0 else LEAKY_RELU_SLOPE * value

    return value if value > 0 else slope * value
