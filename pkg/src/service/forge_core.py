#!/usr/bin/env python3

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config.config_manager import AgentKind, ConfigManager
from experiments.export import baseline_mean_steps, write_results
from experiments.histograms import suite_histograms
from experiments.suites import EvalRecord, suite_baseline, suite_robustness, suite_transfer, summarize
from nes.runner import NesResult, NesRunConfig, run_nes
from synthetic.checkpoint import load_se
from synthetic.environment import SyntheticEnvSpec
from utils.error_handler import ExperimentError
from utils.logger import Logger
from utils.process_manager import ProcessManager
from verification.checks import CheckResult, run_checks
from verification.fixtures import write_fixture_set


SeSet = List[Tuple[str, SyntheticEnvSpec]]


class SEForge:

    def __init__( self, config: ConfigManager, seed: int = 1, workers: Optional[int] = None, out_dir: Optional[Path] = None, quiet: bool = False ):

        self.config = config
        self.seed = seed
        self.out_dir = Path(out_dir) if out_dir else Path("runs")
        self.out_dir.mkdir(parents=True, exist_ok=True)

        log_file = self.out_dir / config.logging.file if config.logging.file else None
        self.logger = Logger(str(log_file) if log_file else None, config.logging.level, quiet=quiet)

        self.workers = config.resolve_workers(workers)
        self.pool = ProcessManager(self.workers, config.runtime.executor, self.logger)

        self.task = config.task.spec


    # SE learning

    def train_se( self, n_se: int = 1 ) -> List[NesResult]:

        # Run n_se independent NES searches with seeds seed, seed+1, ...

        run_config = NesRunConfig.from_manager(self.config)
        results = []

        for offset in range(n_se):

            run_seed = self.seed + offset
            run_dir = self.out_dir if n_se == 1 else self.out_dir / f"se_{offset:02d}"
            run_dir.mkdir(parents=True, exist_ok=True)
            self.config.save(run_dir / "config.yaml")

            self.logger.info(f"[+] NES run {offset + 1}/{n_se} (seed {run_seed}) -> {run_dir}")

            result = run_nes(run_config, run_seed, self.pool, logger=self.logger, run_dir=run_dir)
            results.append(result)

            best = result.best.meta.eval_score
            self.logger.info(f"[+] Best mean-SE evaluation {best if best is not None else 'n/a'} after {len(result.reports)} generations")

        return results


    # Checkpoint discovery

    def load_se_set( self, paths: Sequence[Path] = (), se_dir: Optional[Path] = None, n_se: Optional[int] = None ) -> SeSet:

        specs: SeSet = [(Path(path).stem, load_se(path, self.task)) for path in paths]

        if se_dir is not None:

            se_dir = Path(se_dir)

            if not se_dir.is_dir():
                raise ExperimentError(f"SE directory not found: {se_dir}")

            # NES run directories hold best_se.json; plain directories hold bare checkpoints
            found = sorted(se_dir.rglob("best_se.json")) or sorted(se_dir.glob("*.json"))

            for path in found:

                se_id = path.parent.relative_to(se_dir).as_posix() if path.name == "best_se.json" else path.stem
                specs.append((se_id if se_id != "." else path.stem, load_se(path, self.task)))

        if n_se is not None:
            specs = specs[:n_se]

        if not specs:
            raise ExperimentError("no SE checkpoints given; pass checkpoint files or --se-dir")

        self.logger.info(f"[+] Loaded {len(specs)} SE checkpoint(s) for {self.task.name}")
        return specs


    # Suites

    def _finish( self, records: List[EvalRecord], baseline_dir: Optional[Path] = None ) -> Dict[str, Any]:

        steps = baseline_mean_steps(baseline_dir) if baseline_dir else None
        summary = summarize(records, self.task, steps)
        summary['seed'] = self.seed

        for path in write_results(records, summary, self.out_dir):
            self.logger.info(f"[>] Wrote {path}")

        self.logger.info(f"[+] Mean return {summary['mean_return']:.2f} ± {summary['std_return']:.2f}, solved {summary['solved_fraction']:.0%}, mean train steps {summary['mean_train_steps']:.0f}")

        if 'train_step_reduction' in summary:
            self.logger.info(f"[+] Train steps vs. baseline: {summary['train_step_reduction']:.1%} fewer")

        return summary


    def eval_se( self, specs: SeSet, n_agents: Optional[int] = None, agent_kind: Optional[str] = None, baseline_dir: Optional[Path] = None ) -> Dict[str, Any]:

        # Fixed default HPs, every given checkpoint regardless of its recorded score

        records = suite_robustness(

            specs,
            self.config.agent_config(agent_kind),
            self.config.training,
            n_agents or self.config.experiment.n_agents,
            self.seed,
            self.pool,
            require_solved=False,
            logger=self.logger,
            label="eval-se"
        )

        return self._finish(records, baseline_dir)


    def robustness( self, specs: SeSet, n_agents: Optional[int] = None, baseline_dir: Optional[Path] = None ) -> Dict[str, Any]:

        records = suite_robustness(

            specs,
            self.config.agent_config(AgentKind.DDQN),
            self.config.training,
            n_agents or self.config.experiment.n_agents,
            self.seed,
            self.pool,
            hp_variation=self.config.hp_variation,
            require_solved=self.config.experiment.require_solved,
            logger=self.logger
        )

        return self._finish(records, baseline_dir)


    def transfer( self, specs: SeSet, target: str, n_agents: Optional[int] = None, baseline_dir: Optional[Path] = None ) -> Dict[str, Any]:

        records = suite_transfer(

            specs,
            self.config.agent_config(target),
            self.config.training,
            n_agents or self.config.experiment.n_agents,
            self.seed,
            self.pool,
            hp_variation=self.config.hp_variation,
            require_solved=self.config.experiment.require_solved,
            logger=self.logger
        )

        return self._finish(records, baseline_dir)


    def baseline( self, n: Optional[int] = None, agent_kind: Optional[str] = None ) -> Dict[str, Any]:

        records = suite_baseline(

            self.task,
            self.config.agent_config(agent_kind),
            self.config.training,
            n or self.config.experiment.n_baseline,
            self.seed,
            self.pool,
            hp_variation=self.config.hp_variation,
            logger=self.logger
        )

        return self._finish(records)


    def histograms( self, specs: SeSet, n_agents: Optional[int] = None ) -> Dict[str, Any]:

        se_id, spec = specs[0]

        if len(specs) > 1:
            self.logger.warning(f"[!] Histograms use one SE; taking {se_id} and ignoring {len(specs) - 1} more")

        return suite_histograms(

            spec,
            self.config.agent_config(AgentKind.DDQN),
            self.config.training,
            n_agents or self.config.experiment.histogram_agents,
            self.config.experiment.histogram_bins,
            self.seed,
            self.out_dir,
            self.pool,
            self.logger,
            se_id
        )


    # Oracles

    def verify( self, names: Optional[Sequence[str]] = None, fixture_dir: Optional[Path] = None, write_fixtures: Optional[Path] = None ) -> List[CheckResult]:

        if write_fixtures:

            paths = write_fixture_set(write_fixtures)
            self.logger.info(f"[+] Wrote {len(paths)} trajectory fixtures to {write_fixtures}")

        return run_checks(names, self.logger, fixture_dir)
