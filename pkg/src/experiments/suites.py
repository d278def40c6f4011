#!/usr/bin/env python3
"""
Evaluation suites: agents trained on learned SEs (robustness, transfer,
plain checkpoint evaluation) or on the real task (baseline), each scored
with greedy test episodes on the real task.

Jobs run through the worker pool; every record is seeded from
(run seed, SE id, agent index) so it can be rebuilt on its own.
"""

import zlib
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from agents.factory import create_agent
from config.config_manager import AgentConfig, AgentKind, HpVariationConfig, TrainingConfig
from envs.environment import make_environment
from envs.types import TaskSpec
from synthetic.environment import SyntheticEnvSpec, SyntheticEnvironment
from training.trainer import evaluate_agent_episodes, train_agent
from utils.error_handler import ExperimentError
from utils.logger import Logger
from utils.process_manager import ProcessManager
from .hp_sampler import HpSampler


REAL_ENV_ID = "real"


@dataclass
class EvalRecord:

    se_id: str
    agent_index: int
    agent_kind: str
    learning_rate: float
    batch_size: int
    hidden_size: int
    hidden_layers: int
    returns: List[float]
    episodes: int
    steps: int
    eval_steps: int
    stop_cause: str = ""


    @property
    def mean_return( self ) -> float:

        return float(np.mean(self.returns))


    @property
    def std_return( self ) -> float:

        return float(np.std(self.returns))


@dataclass
class AgentJob:

    se_id: str
    agent_index: int
    task: TaskSpec
    agent: AgentConfig
    training: TrainingConfig
    seed: Tuple[int, ...]
    spec: Optional[SyntheticEnvSpec] = None
    hp_variation: Optional[HpVariationConfig] = None


def record_seed( run_seed: int, se_id: str, agent_index: int ) -> Tuple[int, ...]:

    return (run_seed, zlib.crc32(se_id.encode('utf-8')), agent_index)


def run_agent_job( job: AgentJob ) -> EvalRecord:

    rng = np.random.default_rng(np.random.SeedSequence(list(job.seed)))
    config = job.agent

    if job.hp_variation is not None:
        config = HpSampler(job.hp_variation).apply(config, rng)

    env = make_environment(job.task, rng) if job.spec is None else SyntheticEnvironment(job.spec, rng)

    with np.errstate(over='ignore', invalid='ignore'):

        agent = create_agent(job.task, config, rng)
        report = train_agent(agent, env, job.training, rng)
        episodes = evaluate_agent_episodes(agent, job.task, job.training.test_episodes, rng)

    return EvalRecord(

        se_id=job.se_id,
        agent_index=job.agent_index,
        agent_kind=config.agent_kind.value,
        learning_rate=config.learning_rate,
        batch_size=config.batch_size,
        hidden_size=config.hidden_size,
        hidden_layers=config.hidden_layers,
        returns=[episode.total_reward for episode in episodes],
        episodes=report.episodes_used,
        steps=report.env_steps_used,
        eval_steps=report.eval_steps_used,
        stop_cause=report.stop_cause.value
    )


def _run_jobs( jobs: List[AgentJob], pool: ProcessManager, logger: Optional[Logger], label: str ) -> List[EvalRecord]:

    if logger:
        logger.info(f"[+] {label}: {len(jobs)} agent runs on {pool.workers} worker(s)")

    outcomes = pool.run_ordered(run_agent_job, jobs)
    failures = [outcome for outcome in outcomes if not outcome.ok]

    if failures:

        first = failures[0]
        job = jobs[first.index]
        raise ExperimentError(f"{label}: {len(failures)} agent run(s) failed, first {job.se_id}/{job.agent_index}: {first.error}")

    records = [outcome.value for outcome in outcomes]

    if logger:
        logger.info(f"[+] {label}: mean return {np.mean([r.mean_return for r in records]):.2f}, mean train steps {np.mean([r.steps for r in records]):.0f}")

    return records


def _solving_specs( specs: Sequence[Tuple[str, SyntheticEnvSpec]], require_solved: bool, logger: Optional[Logger] ) -> List[Tuple[str, SyntheticEnvSpec]]:

    if not require_solved:
        return list(specs)

    kept = []

    for se_id, spec in specs:

        score = spec.meta.eval_score

        if score is not None and score >= spec.task.solved_reward:
            kept.append((se_id, spec))

        elif logger:
            logger.warning(f"[!] Skipping SE {se_id}: recorded evaluation {score} below solved reward {spec.task.solved_reward}")

    if not kept:
        raise ExperimentError("no SE in the set meets the solved threshold")

    return kept


def suite_robustness( specs: Sequence[Tuple[str, SyntheticEnvSpec]], agent: AgentConfig, training: TrainingConfig, n_agents: int, run_seed: int, pool: ProcessManager, hp_variation: Optional[HpVariationConfig] = None, require_solved: bool = True, logger: Optional[Logger] = None, label: str = "robustness" ) -> List[EvalRecord]:

    # n_agents per SE, HPs drawn from hp_variation when given, otherwise the fixed config

    specs = _solving_specs(specs, require_solved, logger)

    jobs = [

        AgentJob(

            se_id=se_id,
            agent_index=index,
            task=spec.task,
            agent=agent,
            training=training,
            seed=record_seed(run_seed, se_id, index),
            spec=spec,
            hp_variation=hp_variation
        )
        for se_id, spec in specs
        for index in range(n_agents)
    ]

    return _run_jobs(jobs, pool, logger, label)


def suite_transfer( specs: Sequence[Tuple[str, SyntheticEnvSpec]], target: AgentConfig, training: TrainingConfig, n_agents: int, run_seed: int, pool: ProcessManager, hp_variation: Optional[HpVariationConfig] = None, require_solved: bool = True, logger: Optional[Logger] = None ) -> List[EvalRecord]:

    if target.agent_kind is AgentKind.DDQN:
        raise ExperimentError("transfer targets are dueling_ddqn or td3_discrete; the SEs were learned with DDQN")

    return suite_robustness(specs, target, training, n_agents, run_seed, pool, hp_variation, require_solved, logger, label=f"transfer to {target.agent_kind.value}")


def suite_baseline( task: TaskSpec, agent: AgentConfig, training: TrainingConfig, n: int, run_seed: int, pool: ProcessManager, hp_variation: Optional[HpVariationConfig] = None, logger: Optional[Logger] = None ) -> List[EvalRecord]:

    jobs = [

        AgentJob(

            se_id=REAL_ENV_ID,
            agent_index=index,
            task=task,
            agent=agent,
            training=training,
            seed=record_seed(run_seed, REAL_ENV_ID, index),
            hp_variation=hp_variation
        )
        for index in range(n)
    ]

    return _run_jobs(jobs, pool, logger, f"baseline on real {task.name}")


def summarize( records: Sequence[EvalRecord], task: TaskSpec, baseline_mean_steps: Optional[float] = None ) -> Dict[str, Any]:

    if not records:
        raise ExperimentError("cannot summarize an empty record set")

    returns = np.concatenate([np.asarray(record.returns, dtype=np.float64) for record in records])
    mean_steps = float(np.mean([record.steps for record in records]))

    summary: Dict[str, Any] = {

        'task': task.name,
        'agent_kinds': sorted({record.agent_kind for record in records}),
        'n_records': len(records),
        'n_returns': int(returns.shape[0]),
        'mean_return': float(returns.mean()),
        'std_return': float(returns.std()),
        'solved_fraction': float(np.mean([record.mean_return >= task.solved_reward for record in records])),
        'mean_episodes': float(np.mean([record.episodes for record in records])),
        'mean_train_steps': mean_steps,
        'mean_eval_steps': float(np.mean([record.eval_steps for record in records]))
    }

    if baseline_mean_steps:

        summary['baseline_mean_train_steps'] = float(baseline_mean_steps)
        summary['train_step_ratio'] = mean_steps / baseline_mean_steps
        summary['train_step_reduction'] = 1.0 - mean_steps / baseline_mean_steps

    return summary
