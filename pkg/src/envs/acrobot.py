#!/usr/bin/env python3

import math
from typing import Tuple

import numpy as np

from utils.error_handler import DimensionError


DT = 0.2

LINK_LENGTH_1 = 1.0
LINK_MASS_1 = 1.0
LINK_MASS_2 = 1.0
LINK_COM_POS_1 = 0.5
LINK_COM_POS_2 = 0.5
LINK_MOI = 1.0
GRAVITY = 9.8

MAX_VEL_1 = 4 * math.pi
MAX_VEL_2 = 9 * math.pi

AVAIL_TORQUE = (-1.0, 0.0, +1.0)

RESET_BOUND = 0.1


def reset_acrobot( rng: np.random.Generator ) -> np.ndarray:

    return rng.uniform(low=-RESET_BOUND, high=RESET_BOUND, size=(4,))


def acrobot_observation( physical: np.ndarray ) -> np.ndarray:

    theta1, theta2, dtheta1, dtheta2 = (float(v) for v in physical)

    return np.array([

        math.cos(theta1), math.sin(theta1),
        math.cos(theta2), math.sin(theta2),
        dtheta1, dtheta2
    ], dtype=np.float64)


def _dsdt( s: Tuple[float, ...] ) -> Tuple[float, ...]:

    # Two-link equations of motion ("book" variant); s = (theta1, theta2, dtheta1, dtheta2, torque)

    m1 = LINK_MASS_1
    m2 = LINK_MASS_2
    l1 = LINK_LENGTH_1
    lc1 = LINK_COM_POS_1
    lc2 = LINK_COM_POS_2
    I1 = LINK_MOI
    I2 = LINK_MOI
    g = GRAVITY

    theta1, theta2, dtheta1, dtheta2, a = s

    d1 = m1 * lc1 ** 2 + m2 * (l1 ** 2 + lc2 ** 2 + 2 * l1 * lc2 * math.cos(theta2)) + I1 + I2
    d2 = m2 * (lc2 ** 2 + l1 * lc2 * math.cos(theta2)) + I2
    phi2 = m2 * lc2 * g * math.cos(theta1 + theta2 - math.pi / 2.0)
    phi1 = (

        -m2 * l1 * lc2 * dtheta2 ** 2 * math.sin(theta2)
        - 2 * m2 * l1 * lc2 * dtheta2 * dtheta1 * math.sin(theta2)
        + (m1 * lc1 + m2 * l1) * g * math.cos(theta1 - math.pi / 2.0)
        + phi2
    )

    ddtheta2 = (a + d2 / d1 * phi1 - m2 * l1 * lc2 * dtheta1 ** 2 * math.sin(theta2) - phi2) / (m2 * lc2 ** 2 + I2 - d2 ** 2 / d1)
    ddtheta1 = -(d2 * ddtheta2 + phi1) / d1

    return (dtheta1, dtheta2, ddtheta1, ddtheta2, 0.0)


def _rk4( y0: Tuple[float, ...], dt: float ) -> Tuple[float, ...]:

    dt2 = dt / 2.0

    k1 = _dsdt(y0)
    k2 = _dsdt(tuple(y + dt2 * k for y, k in zip(y0, k1)))
    k3 = _dsdt(tuple(y + dt2 * k for y, k in zip(y0, k2)))
    k4 = _dsdt(tuple(y + dt * k for y, k in zip(y0, k3)))

    return tuple(

        y + dt / 6.0 * (a + 2 * b + 2 * c + d)
        for y, a, b, c, d in zip(y0, k1, k2, k3, k4)
    )


def _wrap( x: float, m: float, M: float ) -> float:

    diff = M - m

    while x > M:
        x = x - diff

    while x < m:
        x = x + diff

    return x


def _bound( x: float, m: float, M: float ) -> float:

    return min(max(x, m), M)


def acrobot_terminal( physical: np.ndarray ) -> bool:

    theta1, theta2 = float(physical[0]), float(physical[1])
    return bool(-math.cos(theta1) - math.cos(theta2 + theta1) > 1.0)


def acrobot_dynamics( physical: np.ndarray, action: int ) -> Tuple[np.ndarray, bool]:

    if action not in (0, 1, 2):
        raise DimensionError(f"Acrobot action must be 0, 1 or 2, got {action}")

    augmented = tuple(float(v) for v in physical) + (AVAIL_TORQUE[action],)
    ns = list(_rk4(augmented, DT)[:4])

    ns[0] = _wrap(ns[0], -math.pi, math.pi)
    ns[1] = _wrap(ns[1], -math.pi, math.pi)
    ns[2] = _bound(ns[2], -MAX_VEL_1, MAX_VEL_1)
    ns[3] = _bound(ns[3], -MAX_VEL_2, MAX_VEL_2)

    next_physical = np.array(ns, dtype=np.float64)

    return next_physical, acrobot_terminal(next_physical)
