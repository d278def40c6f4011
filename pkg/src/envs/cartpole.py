#!/usr/bin/env python3

import math
from typing import Tuple

import numpy as np

from utils.error_handler import DimensionError


GRAVITY = 9.8
MASS_CART = 1.0
MASS_POLE = 0.1
TOTAL_MASS = MASS_POLE + MASS_CART
HALF_POLE_LENGTH = 0.5
POLE_MASS_LENGTH = MASS_POLE * HALF_POLE_LENGTH
FORCE_MAG = 10.0
TAU = 0.02

X_THRESHOLD = 2.4
THETA_THRESHOLD_RADIANS = 12 * 2 * math.pi / 360

RESET_BOUND = 0.05


def reset_cartpole( rng: np.random.Generator ) -> np.ndarray:

    return rng.uniform(low=-RESET_BOUND, high=RESET_BOUND, size=(4,))


def cartpole_observation( physical: np.ndarray ) -> np.ndarray:

    return np.array(physical, dtype=np.float64)


def cartpole_dynamics( physical: np.ndarray, action: int ) -> Tuple[np.ndarray, bool]:

    # One explicit Euler step; returns the next physical state and the terminal flag

    if action not in (0, 1):
        raise DimensionError(f"CartPole action must be 0 or 1, got {action}")

    x, x_dot, theta, theta_dot = (float(v) for v in physical)
    force = FORCE_MAG if action == 1 else -FORCE_MAG

    costheta = math.cos(theta)
    sintheta = math.sin(theta)

    temp = (force + POLE_MASS_LENGTH * theta_dot ** 2 * sintheta) / TOTAL_MASS
    thetaacc = (GRAVITY * sintheta - costheta * temp) / (HALF_POLE_LENGTH * (4.0 / 3.0 - MASS_POLE * costheta ** 2 / TOTAL_MASS))
    xacc = temp - POLE_MASS_LENGTH * thetaacc * costheta / TOTAL_MASS

    x = x + TAU * x_dot
    x_dot = x_dot + TAU * xacc
    theta = theta + TAU * theta_dot
    theta_dot = theta_dot + TAU * thetaacc

    terminal = (

        x < -X_THRESHOLD
        or x > X_THRESHOLD
        or theta < -THETA_THRESHOLD_RADIANS
        or theta > THETA_THRESHOLD_RADIANS
    )

    return np.array([x, x_dot, theta, theta_dot], dtype=np.float64), terminal
