#!/usr/bin/env python3
"""
Oracle check suites run by the `verify` subcommand.
"""

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from config.config_manager import AgentConfig, AgentKind, HpVariationConfig, NesConfig, ScoreTransform, SeConfig, TrainingConfig
from envs.acrobot import acrobot_dynamics, acrobot_observation
from envs.cartpole import cartpole_dynamics, cartpole_observation
from envs.types import ACROBOT, CARTPOLE, TaskSpec
from network.mlp import Activation, MlpArchitecture, Mlp, forward, init_params, perturb
from nes.runner import NesRunConfig, run_nes
from nes.strategy import sample_noises, transform_scores, update_se
from training.heuristics import StopHeuristicState, real_stop_check, se_stop_check
from utils.logger import Logger
from utils.process_manager import ProcessManager
from .fixtures import TrajectoryFixture, read_trajectory_fixture, random_scripts
from .reference import naive_forward
from .small_mdp import greedy_policy, train_on_small_mdp


PHYSICS_TOLERANCE = 1e-9
GRADIENT_TOLERANCE = 1e-5


@dataclass
class CheckResult:

    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


# Physics


DYNAMICS = {

    CARTPOLE.name: (cartpole_dynamics, cartpole_observation),
    ACROBOT.name: (acrobot_dynamics, acrobot_observation)
}


def replay_deviation( fixture: TrajectoryFixture ) -> float:

    # Max abs deviation of the native dynamics from a recorded trajectory; rewards and done flags must match exactly

    dynamics, observe = DYNAMICS[fixture.task.name]
    physical = np.array(fixture.initial_state, dtype=np.float64)
    worst = 0.0

    for step, action in enumerate(fixture.actions):

        physical, terminal = dynamics(physical, int(action))
        observation = observe(physical)

        if bool(terminal) != bool(fixture.dones[step]):
            return float('inf')

        reward = 1.0 if fixture.task.name == CARTPOLE.name else (0.0 if terminal else -1.0)

        if reward != fixture.rewards[step]:
            return float('inf')

        worst = max(worst, float(np.max(np.abs(observation - fixture.observations[step]))))

    return worst


def check_physics( fixture_dir: Optional[Path] = None, n_scripts: int = 10, n_steps: int = 500, seed: int = 0 ) -> CheckResult:

    if fixture_dir is not None:
        fixtures = [read_trajectory_fixture(path) for path in sorted(Path(fixture_dir).glob("*.csv"))]
    else:
        fixtures = random_scripts(CARTPOLE, n_scripts, n_steps, seed) + random_scripts(ACROBOT, n_scripts, n_steps, seed)

    if not fixtures:
        return CheckResult("physics", False, f"no fixtures found in {fixture_dir}")

    worst = max(replay_deviation(fixture) for fixture in fixtures)

    return CheckResult("physics", worst < PHYSICS_TOLERANCE, f"{len(fixtures)} trajectories, max deviation {worst:.3e}")


# Network


def gradient_relative_error( arch: MlpArchitecture, params: np.ndarray, inputs: np.ndarray, upstream: np.ndarray, coordinates: Sequence[int], h: float = 1e-6 ) -> float:

    # ||analytic - numeric|| / (||analytic|| + ||numeric||) over the sampled coordinates

    net = Mlp(arch, params)
    net.forward(inputs)
    analytic = net.backward(upstream)[0].values[list(coordinates)]

    numeric = np.empty(len(coordinates))

    for k, index in enumerate(coordinates):

        shifted = params.copy()
        shifted[index] += h
        plus = float(np.sum(upstream * forward(arch, shifted, inputs)))
        shifted[index] -= 2 * h
        minus = float(np.sum(upstream * forward(arch, shifted, inputs)))
        numeric[k] = (plus - minus) / (2 * h)

    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)

    if scale == 0:
        return 0.0

    return float(np.linalg.norm(analytic - numeric) / scale)


def random_architecture( rng: np.random.Generator, activation: Activation ) -> MlpArchitecture:

    n_hidden = int(rng.integers(1, 4))

    return MlpArchitecture(

        input_dim=int(rng.integers(1, 7)),
        output_dim=int(rng.integers(1, 5)),
        hidden_sizes=tuple(int(size) for size in rng.integers(2, 17, size=n_hidden)),
        activation=activation
    )


def check_gradients( n_architectures: int = 20, seed: int = 0 ) -> CheckResult:

    rng = np.random.default_rng(seed)
    activations = list(Activation)
    worst = 0.0

    for index in range(n_architectures):

        arch = random_architecture(rng, activations[index % len(activations)])
        params = init_params(arch, rng)

        if arch.n_slopes:
            params[-arch.n_slopes:] = rng.uniform(0.05, 0.5, size=arch.n_slopes)

        inputs = rng.standard_normal((4, arch.input_dim))
        upstream = rng.standard_normal((4, arch.output_dim))
        coordinates = rng.choice(arch.param_count, size=min(100, arch.param_count), replace=False)

        worst = max(worst, gradient_relative_error(arch, params, inputs, upstream, coordinates))

    return CheckResult("gradients", worst < GRADIENT_TOLERANCE, f"{n_architectures} architectures, max relative error {worst:.3e}")


def check_forward_oracle( seed: int = 42 ) -> CheckResult:

    rng = np.random.default_rng(seed)
    arch = MlpArchitecture(input_dim=4, output_dim=5, hidden_sizes=(16,), activation=Activation.TANH)
    params = init_params(arch, rng)
    inputs = rng.standard_normal(4)

    deviation = float(np.max(np.abs(forward(arch, params, inputs) - np.array(naive_forward(arch, params, inputs)))))

    return CheckResult("forward", deviation < 1e-12, f"4-16-5 net, max deviation {deviation:.3e}")


# NES math


def check_nes_math() -> CheckResult:

    problems = []

    tabulated = [

        ([3.0, 1.0], [1.0, 0.0]),
        ([5.0, 5.0, 5.0], [0.0, 0.0, 0.0]),
        ([0.0, 2.0, 4.0], [0.0, 0.0, 1.0])
    ]

    for raw, expected in tabulated:

        got = transform_scores(raw, ScoreTransform.BETTER_AVERAGE)

        if not np.array_equal(got, np.array(expected)):
            problems.append(f"transform {raw} -> {got.tolist()}, expected {expected}")

    e = np.array([1.0, -2.0, 0.5])
    config = NesConfig(step_size=1.0, std_dev=0.1, population_size=2)
    moved = update_se(np.zeros(3), np.stack([e, -e]), np.array([1.0, 0.0]), config)

    if np.max(np.abs(moved - 5.0 * e)) >= 1e-12:
        problems.append(f"update moved psi by {moved.tolist()}, expected {(5.0 * e).tolist()}")

    noises = sample_noises(NesConfig(population_size=16), 32, np.random.default_rng(0))

    if not np.array_equal(noises[8:], -noises[:8]) or np.any(noises[:8].sum(axis=0) + noises[8:].sum(axis=0) != 0):
        problems.append("mirrored noises are not exactly antisymmetric")

    psi = np.array([0.25, -1.5])
    pair = perturb(psi, np.array([0.5, 0.125]), 0.5) + perturb(psi, np.array([-0.5, -0.125]), 0.5)

    if not np.array_equal(pair, 2 * psi):
        problems.append("mirrored perturbations do not sum to 2 psi")

    return CheckResult("nes-math", not problems, "; ".join(problems) or "transform, update and mirroring exact")


# Heuristics


def check_heuristics() -> CheckResult:

    def state( previous: float, recent: float ) -> StopHeuristicState:

        return StopHeuristicState(returns=[previous] * 10 + [recent] * 10)

    cases = [

        ("constant returns", se_stop_check(StopHeuristicState(returns=[100.0] * 20)), True),
        ("1% change", se_stop_check(state(100.0, 101.0)), True),
        ("10% change", se_stop_check(state(100.0, 110.0)), False),
        ("before 2d episodes", se_stop_check(StopHeuristicState(returns=[100.0] * 19)), False),
        ("zero denominator, zero recent", se_stop_check(state(0.0, 0.0)), True),
        ("zero denominator, nonzero recent", se_stop_check(state(0.0, 1.0)), False),
        ("CartPole 200s", real_stop_check([200.0] * 10, CARTPOLE), True),
        ("CartPole 194s", real_stop_check([194.0] * 10, CARTPOLE), False),
        ("Acrobot -95", real_stop_check([-95.0] * 10, ACROBOT), True),
        ("fewer than d test returns", real_stop_check([200.0] * 9, CARTPOLE), False)
    ]

    failures = [name for name, got, expected in cases if got != expected]

    return CheckResult("heuristics", not failures, f"failed: {failures}" if failures else f"{len(cases)} cases")


# Agents


def check_small_mdp( seeds: Sequence[int] = (0, 1, 2, 3, 4) ) -> CheckResult:

    failures = []

    for kind in AgentKind:

        for seed in seeds:

            policy = greedy_policy(train_on_small_mdp(kind, seed))

            if policy != (1, 0):
                failures.append(f"{kind.value}/seed {seed}: {policy}")

    return CheckResult("small-mdp", not failures, f"failed: {failures}" if failures else f"{len(AgentKind) * len(seeds)} runs recover the optimal policy")


# Determinism


def micro_run_config( task: TaskSpec = CARTPOLE ) -> NesRunConfig:

    return NesRunConfig(

        task=task,
        nes=NesConfig(step_size=0.148, std_dev=0.0124, population_size=4, outer_loops=2),
        se=SeConfig(hidden_layers=1, hidden_size=16),
        agent=AgentConfig(initial_episodes=1, batch_size=32, hidden_size=32, hidden_layers=1),
        training=TrainingConfig(max_episodes=5, test_episodes=3),
        hp_variation=HpVariationConfig()
    )


def check_determinism( workers: int = 4, executor: str = "process", run_seed: int = 1 ) -> CheckResult:

    config = micro_run_config()

    serial = run_nes(config, run_seed, ProcessManager(1))
    parallel = run_nes(config, run_seed, ProcessManager(workers, executor))

    same_params = np.array_equal(serial.final.params, parallel.final.params)
    same_scores = [r.scores for r in serial.reports] == [r.scores for r in parallel.reports]

    return CheckResult("determinism", same_params and same_scores, f"serial vs {workers}-way {executor}: params {'identical' if same_params else 'differ'}, scores {'identical' if same_scores else 'differ'}")


CHECKS: Dict[str, Callable[[], CheckResult]] = {

    'physics': check_physics,
    'forward': check_forward_oracle,
    'gradients': check_gradients,
    'nes-math': check_nes_math,
    'heuristics': check_heuristics,
    'small-mdp': check_small_mdp,
    'determinism': check_determinism
}


def run_checks( names: Optional[Sequence[str]] = None, logger: Optional[Logger] = None, fixture_dir: Optional[Path] = None ) -> List[CheckResult]:

    results = []

    for name in names or list(CHECKS):

        started = time.perf_counter()
        result = check_physics(fixture_dir) if name == 'physics' else CHECKS[name]()
        result.seconds = time.perf_counter() - started
        results.append(result)

        if logger:

            status = "[+] PASS" if result.passed else "[x] FAIL"
            logger.info(f"{status} {result.name}: {result.detail} ({result.seconds:.2f}s)")

    return results
