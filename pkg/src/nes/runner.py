#!/usr/bin/env python3
"""
NES outer loop over synthetic environment parameters.

Each generation perturbs the mean parameters once per population member,
trains a fresh agent on every perturbed SE and scores it on the real task.
The mean itself is trained and scored alongside the members; three solved
mean evaluations in a row end the search early.

Every member draws its randomness from SeedSequence([run_seed, generation,
index]) and results are aggregated in index order, so any worker count
produces the same parameter trajectory.
"""

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from agents.factory import create_agent
from config.config_manager import AgentConfig, ConfigManager, HpVariationConfig, NesConfig, SeConfig, TrainingConfig
from envs.types import TaskSpec
from experiments.hp_sampler import HpSampler
from network.mlp import perturb
from synthetic.checkpoint import save_se
from synthetic.environment import SyntheticEnvSpec, SyntheticEnvironment, build_se_spec
from training.trainer import TrainReport, evaluate_agent, train_agent
from utils.error_handler import ErrorHandler, NesError, NumericalError
from utils.logger import Logger
from utils.process_manager import ProcessManager
from .run_log import RunLog
from .strategy import sample_noises, transform_scores, update_se


@dataclass
class NesRunConfig:

    task: TaskSpec
    nes: NesConfig
    se: SeConfig
    agent: AgentConfig
    training: TrainingConfig
    hp_variation: HpVariationConfig


    @classmethod
    def from_manager( cls, manager: ConfigManager ) -> "NesRunConfig":

        return cls(

            task=manager.task.spec,
            nes=manager.nes,
            se=manager.se,
            agent=manager.agent_config(),
            training=manager.training,
            hp_variation=manager.hp_variation
        )


@dataclass
class MemberTask:

    index: int
    spec: SyntheticEnvSpec
    agent: AgentConfig
    training: TrainingConfig
    seed: Tuple[int, ...]
    hp_variation: Optional[HpVariationConfig] = None


@dataclass
class GenerationReport:

    generation: int
    scores: List[float]
    transformed: List[float]
    update_norm: float
    mean_eval: Optional[float]
    wall_ms: float
    failed_members: List[int] = field(default_factory=list)


    def to_dict( self ) -> Dict[str, Any]:

        return {

            'generation': self.generation,
            'scores': self.scores,
            'transformed': self.transformed,
            'update_norm': self.update_norm,
            'mean_eval': self.mean_eval,
            'wall_ms': self.wall_ms,
            'failed_members': self.failed_members
        }


@dataclass
class NesResult:

    best: SyntheticEnvSpec
    final: SyntheticEnvSpec
    reports: List[GenerationReport]
    early_stopped: bool = False


def train_and_evaluate( spec: SyntheticEnvSpec, agent_config: AgentConfig, training: TrainingConfig, rng: np.random.Generator ) -> Tuple[float, TrainReport]:

    # Diverging SEs overflow freely; the agent trained on them simply scores poorly
    with np.errstate(over='ignore', invalid='ignore'):

        agent = create_agent(spec.task, agent_config, rng)
        report = train_agent(agent, SyntheticEnvironment(spec, rng), training, rng)
        score = evaluate_agent(agent, spec.task, training.test_episodes, rng)

    if not np.isfinite(score):
        raise NumericalError(f"non-finite evaluation score {score}")

    return score, report


def evaluate_member( task: MemberTask ) -> float:

    rng = np.random.default_rng(np.random.SeedSequence(list(task.seed)))
    config = task.agent

    if task.hp_variation is not None:
        config = HpSampler(task.hp_variation).apply(config, rng)

    return train_and_evaluate(task.spec, config, task.training, rng)[0]


def _member_scores( outcomes, error_handler: Optional[ErrorHandler] ) -> Tuple[np.ndarray, List[int]]:

    # Failed members take the population minimum

    scores: List[Optional[float]] = []
    failed: List[int] = []

    for outcome in outcomes:

        value = outcome.value if outcome.ok else None

        if value is None or not np.isfinite(value):

            failed.append(outcome.index)
            scores.append(None)

            if error_handler and outcome.error is not None:
                error_handler.handle_error(outcome.error, f"NES member {outcome.index}")

            continue

        scores.append(float(value))

    valid = [score for score in scores if score is not None]

    if not valid:
        raise NesError("every population member failed")

    floor = min(valid)
    return np.array([floor if score is None else score for score in scores]), failed


def run_nes( config: NesRunConfig, run_seed: int, pool: Optional[ProcessManager] = None, evaluator: Callable[[MemberTask], float] = evaluate_member, logger: Optional[Logger] = None, run_dir: Optional[Path] = None, initial: Optional[SyntheticEnvSpec] = None ) -> NesResult:

    problems = config.nes.validate()

    if problems:
        raise NesError("; ".join(problems))

    pool = pool or ProcessManager(workers=1, logger=logger)
    error_handler = ErrorHandler(logger) if logger else None
    run_log = RunLog(Path(run_dir) / "run_log.jsonl") if run_dir else None

    nes = config.nes
    spec = initial or build_se_spec(

        config.task,
        config.se.hidden_sizes,
        config.se.activation,
        np.random.default_rng(np.random.SeedSequence([run_seed])),
        run_seed
    )

    psi = np.array(spec.params, dtype=np.float64)
    best: Optional[SyntheticEnvSpec] = None
    best_score = -np.inf
    solved_streak = 0
    reports: List[GenerationReport] = []
    early_stopped = False

    if logger:
        logger.info(f"[+] NES on {config.task.name}: {spec.arch.param_count} SE parameters, population {nes.population_size}, {nes.outer_loops} generations, {pool.workers} worker(s)")

    for generation in range(nes.outer_loops):

        started = time.perf_counter()
        current = spec.with_params(psi, nes_iteration=generation)

        noises = sample_noises(nes, psi.shape[0], np.random.default_rng(np.random.SeedSequence([run_seed, generation])))
        hp_ranges = config.hp_variation if nes.hp_variation else None

        tasks = [

            MemberTask(

                index=index,
                spec=current.with_params(perturb(psi, noises[index], nes.std_dev)),
                agent=config.agent,
                training=config.training,
                seed=(run_seed, generation, index),
                hp_variation=hp_ranges
            )
            for index in range(nes.population_size)
        ]

        if nes.evaluate_mean:

            # The unperturbed mean trains a default-HP agent on its own stream
            tasks.append(MemberTask(

                index=nes.population_size,
                spec=current,
                agent=config.agent,
                training=config.training,
                seed=(run_seed, generation, nes.population_size)
            ))

        outcomes = pool.run_ordered(evaluator, tasks)
        scores, failed = _member_scores(outcomes[:nes.population_size], error_handler)

        transformed = transform_scores(scores, nes.score_transformation)
        new_psi = update_se(psi, noises, transformed, nes)

        mean_eval = None

        if nes.evaluate_mean:

            mean_outcome = outcomes[nes.population_size]

            if mean_outcome.ok and np.isfinite(mean_outcome.value):
                mean_eval = float(mean_outcome.value)

            elif error_handler and mean_outcome.error is not None:
                error_handler.handle_error(mean_outcome.error, f"NES mean evaluation, generation {generation}")

        report = GenerationReport(

            generation=generation,
            scores=scores.tolist(),
            transformed=transformed.tolist(),
            update_norm=float(np.linalg.norm(new_psi - psi)),
            mean_eval=mean_eval,
            wall_ms=(time.perf_counter() - started) * 1000.0,
            failed_members=failed
        )
        reports.append(report)

        if run_log:
            run_log.append(report.to_dict())

        if logger:

            mean_text = "n/a" if mean_eval is None else f"{mean_eval:.2f}"
            logger.info(f"[+] Generation {generation}: max {scores.max():.2f}, mean {scores.mean():.2f}, update {report.update_norm:.4f}, mean-psi eval {mean_text}, {report.wall_ms / 1000.0:.1f}s")

            if failed:
                logger.warning(f"[!] Generation {generation}: members {failed} failed and took the population minimum")

        if mean_eval is not None and mean_eval > best_score:

            best_score = mean_eval
            best = current.with_params(psi, eval_score=mean_eval)

            if run_dir:
                save_se(best, Path(run_dir) / "best_se.json")

        solved_streak = solved_streak + 1 if mean_eval is not None and mean_eval >= config.task.solved_reward else 0
        psi = new_psi

        if solved_streak >= nes.early_stop_patience:

            early_stopped = True

            if logger:
                logger.info(f"[+] Mean SE solved {config.task.name} in {solved_streak} consecutive generations; stopping early")

            break

    final = spec.with_params(psi, nes_iteration=len(reports))

    if best is None:
        best = final

    if run_dir:

        save_se(final, Path(run_dir) / "final_se.json")

        if not (Path(run_dir) / "best_se.json").exists():
            save_se(best, Path(run_dir) / "best_se.json")

    return NesResult(best=best, final=final, reports=reports, early_stopped=early_stopped)
