#!/usr/bin/env python3
"""
Distribution comparison between a synthetic environment and the real task.

Three tuple sources are collected per agent:
    blue    transitions seen while training on the SE
    orange  transitions seen while evaluating on the real task
    green   the orange (state, action) pairs replayed through the SE
Each next-state dimension and the reward are binned over the pooled range of
the three sources and written as CSV plus an SVG overlay.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from scipy.stats import wasserstein_distance

from agents.factory import create_agent
from config.config_manager import AgentConfig, TrainingConfig
from envs.types import Transition
from synthetic.environment import SyntheticEnvSpec, SyntheticEnvironment, se_step
from training.trainer import evaluate_agent_episodes, train_agent
from utils.error_handler import ExperimentError, safe_execute
from utils.logger import Logger
from utils.process_manager import ProcessManager
from .suites import record_seed


SOURCES = ('blue', 'orange', 'green')
HISTOGRAM_COLUMNS = ['bin_left', 'bin_right', 'count_blue', 'count_orange', 'count_green']


@dataclass
class TupleSet:

    # Rows of next_state | reward

    blue: np.ndarray
    orange: np.ndarray
    green: np.ndarray


@dataclass
class HistogramJob:

    agent_index: int
    spec: SyntheticEnvSpec
    agent: AgentConfig
    training: TrainingConfig
    seed: Tuple[int, ...]


def _rows( transitions: List[Transition] ) -> np.ndarray:

    if not transitions:
        return np.zeros((0, 0))

    return np.array([np.append(t.next_state, t.reward) for t in transitions], dtype=np.float64)


def collect_tuples( job: HistogramJob ) -> TupleSet:

    rng = np.random.default_rng(np.random.SeedSequence(list(job.seed)))
    spec = job.spec
    blue: List[Transition] = []
    orange: List[Transition] = []

    with np.errstate(over='ignore', invalid='ignore'):

        agent = create_agent(spec.task, job.agent, rng)
        train_agent(agent, SyntheticEnvironment(spec, rng), job.training, rng, on_transition=blue.append)
        evaluate_agent_episodes(agent, spec.task, job.training.test_episodes, rng, on_transition=orange.append)

        green = [

            np.append(*se_step(spec, transition.state, transition.action))
            for transition in orange
        ]

    return TupleSet(blue=_rows(blue), orange=_rows(orange), green=np.array(green, dtype=np.float64))


def dimension_names( obs_dim: int ) -> List[str]:

    return [f"state_{index}" for index in range(obs_dim)] + ['reward']


def histogram_frame( blue: np.ndarray, orange: np.ndarray, green: np.ndarray, bins: int ) -> pd.DataFrame:

    # Uniform bins over the pooled finite range; non-finite samples are left out
    values = [column[np.isfinite(column)] for column in (blue, orange, green)]
    pooled = np.concatenate(values)

    if pooled.size == 0:
        raise ExperimentError("no finite samples to bin")

    edges = np.histogram_bin_edges(pooled, bins=bins)
    counts = [np.histogram(column, bins=edges)[0] for column in values]

    return pd.DataFrame({

        'bin_left': edges[:-1],
        'bin_right': edges[1:],
        'count_blue': counts[0],
        'count_orange': counts[1],
        'count_green': counts[2]
    }, columns=HISTOGRAM_COLUMNS)


def render_svg( frame: pd.DataFrame, title: str, path: Path ) -> None:

    fig, ax = plt.subplots(figsize=(6, 4))
    edges = np.append(frame['bin_left'].to_numpy(), frame['bin_right'].to_numpy()[-1])

    for source, color in (('blue', 'tab:blue'), ('orange', 'tab:orange'), ('green', 'tab:green')):
        ax.stairs(frame[f'count_{source}'].to_numpy(), edges, color=color, label=source)

    ax.set_title(title)
    ax.set_ylabel('count')
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format='svg')
    plt.close(fig)


def _distance( a: np.ndarray, b: np.ndarray ) -> Optional[float]:

    a = a[np.isfinite(a)]
    b = b[np.isfinite(b)]

    if a.size == 0 or b.size == 0:
        return None

    return float(wasserstein_distance(a, b))


def suite_histograms( spec: SyntheticEnvSpec, agent: AgentConfig, training: TrainingConfig, n_agents: int, bins: int, run_seed: int, out_dir: Path, pool: ProcessManager, logger: Optional[Logger] = None, se_id: str = "se" ) -> Dict[str, Any]:

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    task = spec.task
    prefix = f"hist_{task.name.split('-')[0].lower()}"

    jobs = [

        HistogramJob(agent_index=index, spec=spec, agent=agent, training=training, seed=record_seed(run_seed, se_id, index))
        for index in range(n_agents)
    ]

    if logger:
        logger.info(f"[+] Histograms on {task.name}: {n_agents} default-HP agents")

    outcomes = pool.run_ordered(collect_tuples, jobs)
    failed = [outcome for outcome in outcomes if not outcome.ok]

    if failed:
        raise ExperimentError(f"histogram agent {failed[0].index} failed: {failed[0].error}")

    sets = [outcome.value for outcome in outcomes]
    stacked = {source: np.concatenate([getattr(s, source) for s in sets if getattr(s, source).size], axis=0) for source in SOURCES}

    summary: Dict[str, Any] = {

        'task': task.name,
        'n_agents': n_agents,
        'bins': bins,
        'tuple_counts': {source: int(stacked[source].shape[0]) for source in SOURCES},
        'dimensions': {}
    }

    for column, name in enumerate(dimension_names(task.obs_dim)):

        blue, orange, green = (stacked[source][:, column] for source in SOURCES)
        frame = histogram_frame(blue, orange, green, bins)

        csv_path = out_dir / f"{prefix}_{name}.csv"
        frame.to_csv(csv_path, index=False)
        safe_execute(lambda: render_svg(frame, f"{task.name} {name}", out_dir / f"{prefix}_{name}.svg"), logger, f"rendering {name} histogram")

        summary['dimensions'][name] = {

            'occupied_bins': {source: int(np.count_nonzero(frame[f'count_{source}'])) for source in SOURCES},
            'wasserstein_green_blue': _distance(green, blue),
            'wasserstein_green_orange': _distance(green, orange)
        }

        if logger:
            logger.info(f"[>] {name}: W(green, blue) {summary['dimensions'][name]['wasserstein_green_blue']}, W(green, orange) {summary['dimensions'][name]['wasserstein_green_orange']}")

    with (out_dir / f"{prefix}_summary.json").open('w', encoding='utf-8') as f:
        json.dump(summary, f, indent=2)

    return summary
