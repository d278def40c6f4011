#!/usr/bin/env python3

import os
import yaml
import psutil
from enum import Enum
from pathlib import Path
from typing import Dict, Any, List, Optional, Tuple
from dataclasses import dataclass, asdict, replace
from dotenv import load_dotenv

from envs.types import TaskSpec, get_task
from network.mlp import Activation, MAX_HIDDEN_LAYERS
from utils.error_handler import ConfigurationError


THREADS_ENV_VAR = "SEFORGE_THREADS"


class AgentKind(str, Enum):

    DDQN = "ddqn"
    DUELING_DDQN = "dueling_ddqn"
    DISCRETE_TD3 = "td3_discrete"


    @classmethod
    def parse( cls, value: Any ) -> "AgentKind":

        if isinstance(value, AgentKind):
            return value

        aliases = {

            'ddqn': cls.DDQN,
            'dueling_ddqn': cls.DUELING_DDQN,
            'duelingddqn': cls.DUELING_DDQN,
            'dueling': cls.DUELING_DDQN,
            'td3_discrete': cls.DISCRETE_TD3,
            'discretetd3': cls.DISCRETE_TD3,
            'discrete_td3': cls.DISCRETE_TD3,
            'td3': cls.DISCRETE_TD3
        }

        key = str(value).strip().lower().replace('-', '_')

        if key not in aliases:
            raise ConfigurationError(f"Unknown agent kind: {value}. Use 'ddqn', 'dueling_ddqn' or 'td3_discrete'")

        return aliases[key]


class ScoreTransform(str, Enum):

    BETTER_AVERAGE = "better_average"
    RANK_LINEAR = "rank_linear"
    RAW = "raw"


    @classmethod
    def parse( cls, value: Any ) -> "ScoreTransform":

        if isinstance(value, ScoreTransform):
            return value

        key = str(value).strip().lower().replace('-', '_').replace(' ', '_').replace('.', '')

        aliases = {

            'better_average': cls.BETTER_AVERAGE,
            'better_avg': cls.BETTER_AVERAGE,
            'rank_linear': cls.RANK_LINEAR,
            'rank_transform': cls.RANK_LINEAR,
            'raw': cls.RAW,
            'linear_transform': cls.RAW
        }

        if key not in aliases:
            raise ConfigurationError(f"Unknown score transformation: {value}")

        return aliases[key]


@dataclass
class AgentConfig:

    agent_kind: AgentKind = AgentKind.DDQN
    learning_rate: float = 0.001
    batch_size: int = 128
    hidden_size: int = 128
    hidden_layers: int = 2
    target_update_rate: float = 0.01
    discount: float = 0.99
    eps_init: float = 1.0
    eps_min: float = 0.01
    eps_decay: float = 0.9
    initial_episodes: int = 10
    activation: Activation = Activation.RELU
    replay_buffer_size: int = 100000
    gumbel_start_temperature: float = 1.0
    policy_delay: int = 2


    @classmethod
    def for_kind( cls, kind: Any ) -> "AgentConfig":

        # Default HPs per agent kind; TD3 uses a smaller learning rate and Tanh

        kind = AgentKind.parse(kind)

        if kind is AgentKind.DISCRETE_TD3:
            return cls(agent_kind=kind, learning_rate=0.0005, activation=Activation.TANH)

        return cls(agent_kind=kind)


    def with_hps( self, **changes: Any ) -> "AgentConfig":

        return replace(self, **changes)


    def validate( self ) -> List[str]:

        problems = []

        if not self.learning_rate > 0:
            problems.append(f"learning_rate must be positive, got {self.learning_rate}")

        if self.batch_size < 1:
            problems.append(f"batch_size must be >= 1, got {self.batch_size}")

        if self.hidden_size < 1:
            problems.append(f"hidden_layer_size must be >= 1, got {self.hidden_size}")

        if not 1 <= self.hidden_layers <= MAX_HIDDEN_LAYERS:
            problems.append(f"hidden_layers must be within [1, {MAX_HIDDEN_LAYERS}], got {self.hidden_layers}")

        if not 0.0 < self.target_update_rate <= 1.0:
            problems.append(f"target_network_update_rate must be in (0, 1], got {self.target_update_rate}")

        if not 0.0 < self.discount < 1.0:
            problems.append(f"discount_factor must be in (0, 1), got {self.discount}")

        if not 0.0 <= self.eps_min <= self.eps_init <= 1.0:
            problems.append(f"epsilon bounds must satisfy 0 <= minimal <= initial <= 1, got {self.eps_min}/{self.eps_init}")

        if not 0.0 < self.eps_decay <= 1.0:
            problems.append(f"epsilon_decay_factor must be in (0, 1], got {self.eps_decay}")

        if self.initial_episodes < 0:
            problems.append(f"initial_episodes must be >= 0, got {self.initial_episodes}")

        if self.replay_buffer_size < self.batch_size:
            problems.append(f"replay_buffer_size {self.replay_buffer_size} smaller than batch_size {self.batch_size}")

        if not self.gumbel_start_temperature > 0:
            problems.append(f"gumbel_softmax_start_temperature must be positive, got {self.gumbel_start_temperature}")

        if self.policy_delay < 1:
            problems.append(f"policy_delay must be >= 1, got {self.policy_delay}")

        return problems


    def to_dict( self ) -> Dict[str, Any]:

        data = asdict(self)
        data['agent_kind'] = self.agent_kind.value
        data['activation'] = self.activation.value
        return data


@dataclass
class TaskConfig:

    name: str = "CartPole-v0"


    @property
    def spec( self ) -> TaskSpec:

        return get_task(self.name)


@dataclass
class SeConfig:

    hidden_layers: int = 1
    hidden_size: int = 128
    activation: Activation = Activation.LEAKY_RELU


    @property
    def hidden_sizes( self ) -> Tuple[int, ...]:

        return (self.hidden_size,) * self.hidden_layers


@dataclass
class NesConfig:

    step_size: float = 1.0
    std_dev: float = 0.05
    population_size: int = 16
    outer_loops: int = 200
    mirrored: bool = True
    score_transformation: ScoreTransform = ScoreTransform.BETTER_AVERAGE
    hp_variation: bool = True
    early_stop_patience: int = 3
    evaluate_mean: bool = True


    def validate( self ) -> List[str]:

        problems = []

        if not self.step_size > 0:
            problems.append(f"nes.step_size must be positive, got {self.step_size}")

        if not self.std_dev > 0:
            problems.append(f"nes.std_dev must be positive, got {self.std_dev}")

        if self.population_size < 2:
            problems.append(f"nes.population_size must be >= 2, got {self.population_size}")

        if self.mirrored and self.population_size % 2:
            problems.append(f"nes.population_size must be even with mirrored sampling, got {self.population_size}")

        if self.outer_loops < 1:
            problems.append(f"nes.outer_loops must be >= 1, got {self.outer_loops}")

        if self.early_stop_patience < 1:
            problems.append(f"nes.early_stop_patience must be >= 1, got {self.early_stop_patience}")

        return problems


@dataclass
class TrainingConfig:

    max_episodes: int = 1000
    early_out_num: int = 10
    early_out_diff: float = 0.01
    test_episodes: int = 10
    stop_heuristics: bool = True


    def validate( self ) -> List[str]:

        problems = []

        if self.max_episodes < 1:
            problems.append(f"training.max_train_episodes must be >= 1, got {self.max_episodes}")

        if self.early_out_num < 1:
            problems.append(f"training.early_out_num must be >= 1, got {self.early_out_num}")

        if self.early_out_diff < 0:
            problems.append(f"training.early_out_diff must be >= 0, got {self.early_out_diff}")

        if self.test_episodes < 1:
            problems.append(f"training.test_episodes must be >= 1, got {self.test_episodes}")

        return problems


@dataclass
class HpVariationConfig:

    learning_rate: Tuple[float, float] = (1e-3 / 3, 3e-3)
    batch_size: Tuple[int, int] = (42, 384)
    hidden_size: Tuple[int, int] = (42, 384)
    hidden_layers: Tuple[int, int] = (1, 3)


    def validate( self ) -> List[str]:

        problems = []

        for name in ('learning_rate', 'batch_size', 'hidden_size', 'hidden_layers'):

            low, high = getattr(self, name)

            if not 0 < low <= high:
                problems.append(f"hp_variation.{name} must satisfy 0 < min <= max, got [{low}, {high}]")

        if self.hidden_layers[1] > MAX_HIDDEN_LAYERS:
            problems.append(f"hp_variation.hidden_layers max must be <= {MAX_HIDDEN_LAYERS}")

        return problems


@dataclass
class ExperimentConfig:

    n_se: int = 40
    n_agents: int = 10
    n_baseline: int = 400
    histogram_agents: int = 10
    histogram_bins: int = 50
    require_solved: bool = True


@dataclass
class RuntimeConfig:

    workers: Optional[int] = None
    executor: str = "process"


@dataclass
class LoggingConfig:

    file: Optional[str] = "SEForge.log"
    level: str = "INFO"


def default_worker_count() -> int:

    return psutil.cpu_count(logical=False) or 1


class ConfigManager:


    def __init__( self, config_path: Optional[str] = None, env_path: str = ".env" ):

        self.config_path = Path(config_path).absolute() if config_path else None
        self.base_dir = self.config_path.parent if self.config_path else Path.cwd()
        self.env_path = self.base_dir / env_path

        self._load_environment()
        self._load_config()


    def _load_environment( self ) -> None:

        # .env is optional; it may carry SEFORGE_THREADS

        if self.env_path.exists():
            load_dotenv(self.env_path)


    def _load_config( self ) -> None:

        # Load and parse the .yaml configuration file

        config_data: Dict[str, Any] = {}

        if self.config_path is not None:

            if not self.config_path.exists():
                raise ConfigurationError(f"Configuration file not found: {self.config_path}")

            try:

                with self.config_path.open('r', encoding='utf-8') as f:
                    config_data = yaml.safe_load(f) or {}

            except yaml.YAMLError as e:
                raise ConfigurationError(f"Invalid YAML in config file: {e}")

            if not isinstance(config_data, dict):
                raise ConfigurationError(f"Config file must contain a mapping of sections: {self.config_path}")

        self.raw = config_data
        self._create_config_objects(config_data)


    def _create_config_objects( self, config_data: Dict[str, Any] ) -> None:

        # Create dataclass instances for each config section; absent keys keep the defaults

        section = lambda name: config_data.get(name) or {}

        try:

            self.task = TaskConfig(name=section('task').get('name', TaskConfig.name))

            se = section('se')
            se_defaults = SeConfig()
            self.se = SeConfig(

                hidden_layers=int(se.get('hidden_layers', se_defaults.hidden_layers)),
                hidden_size=int(se.get('hidden_layer_size', se_defaults.hidden_size)),
                activation=Activation.parse(se.get('activation_function', se_defaults.activation))
            )

            nes = section('nes')
            nes_defaults = NesConfig()
            self.nes = NesConfig(

                step_size=float(nes.get('step_size', nes_defaults.step_size)),
                std_dev=float(nes.get('std_dev', nes_defaults.std_dev)),
                population_size=int(nes.get('population_size', nes_defaults.population_size)),
                outer_loops=int(nes.get('outer_loops', nes_defaults.outer_loops)),
                mirrored=bool(nes.get('mirrored_sampling', nes_defaults.mirrored)),
                score_transformation=ScoreTransform.parse(nes.get('score_transformation', nes_defaults.score_transformation)),
                hp_variation=bool(nes.get('hp_variation', nes_defaults.hp_variation)),
                early_stop_patience=int(nes.get('early_stop_patience', nes_defaults.early_stop_patience)),
                evaluate_mean=bool(nes.get('evaluate_mean', nes_defaults.evaluate_mean))
            )

            self.agent = self._agent_from_section(section('ddqn'), AgentConfig.for_kind(section('ddqn').get('agent_kind', AgentKind.DDQN)))
            self.td3_overrides = section('td3')

            training = section('training')
            training_defaults = TrainingConfig()
            self.training = TrainingConfig(

                max_episodes=int(training.get('max_train_episodes', training_defaults.max_episodes)),
                early_out_num=int(training.get('early_out_num', training_defaults.early_out_num)),
                early_out_diff=float(training.get('early_out_diff', training_defaults.early_out_diff)),
                test_episodes=int(training.get('test_episodes', training_defaults.test_episodes)),
                stop_heuristics=bool(training.get('stop_heuristics', training_defaults.stop_heuristics))
            )

            hp = section('hp_variation')
            hp_defaults = HpVariationConfig()
            self.hp_variation = HpVariationConfig(

                learning_rate=self._range(hp, 'learning_rate', hp_defaults.learning_rate, float),
                batch_size=self._range(hp, 'batch_size', hp_defaults.batch_size, int),
                hidden_size=self._range(hp, 'hidden_size', hp_defaults.hidden_size, int),
                hidden_layers=self._range(hp, 'hidden_layer', hp_defaults.hidden_layers, int)
            )

            experiment = section('experiment')
            experiment_defaults = ExperimentConfig()
            self.experiment = ExperimentConfig(

                n_se=int(experiment.get('n_se', experiment_defaults.n_se)),
                n_agents=int(experiment.get('n_agents', experiment_defaults.n_agents)),
                n_baseline=int(experiment.get('n_baseline', experiment_defaults.n_baseline)),
                histogram_agents=int(experiment.get('histogram_agents', experiment_defaults.histogram_agents)),
                histogram_bins=int(experiment.get('histogram_bins', experiment_defaults.histogram_bins)),
                require_solved=bool(experiment.get('require_solved', experiment_defaults.require_solved))
            )

            runtime = section('runtime')
            self.runtime = RuntimeConfig(

                workers=runtime.get('workers'),
                executor=str(runtime.get('executor', RuntimeConfig.executor))
            )

            logging_section = section('logging')
            self.logging = LoggingConfig(

                file=logging_section.get('file', LoggingConfig.file),
                level=str(logging_section.get('level', LoggingConfig.level))
            )

        except ConfigurationError:
            raise

        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigurationError(f"Error creating configuration objects: {e}")


    @staticmethod
    def _range( section: Dict[str, Any], key: str, default: Tuple, cast ) -> Tuple:

        if key not in section:
            return default

        value = section[key]

        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise ConfigurationError(f"hp_variation.{key} must be a [min, max] pair, got {value}")

        return (cast(value[0]), cast(value[1]))


    @staticmethod
    def _agent_from_section( section: Dict[str, Any], base: AgentConfig ) -> AgentConfig:

        keys = {

            'agent_kind': ('agent_kind', AgentKind.parse),
            'learning_rate': ('learning_rate', float),
            'batch_size': ('batch_size', int),
            'hidden_layer_size': ('hidden_size', int),
            'hidden_layers': ('hidden_layers', int),
            'target_network_update_rate': ('target_update_rate', float),
            'discount_factor': ('discount', float),
            'initial_epsilon': ('eps_init', float),
            'minimal_epsilon': ('eps_min', float),
            'epsilon_decay_factor': ('eps_decay', float),
            'initial_episodes': ('initial_episodes', int),
            'activation_function': ('activation', Activation.parse),
            'replay_buffer_size': ('replay_buffer_size', int),
            'gumbel_softmax_start_temperature': ('gumbel_start_temperature', float),
            'policy_delay': ('policy_delay', int)
        }

        unknown = [key for key in section if key not in keys and key != 'one_hot_encoded_actions']

        if unknown:
            raise ConfigurationError(f"Unknown agent keys: {', '.join(unknown)}")

        changes = {field_name: cast(section[key]) for key, (field_name, cast) in keys.items() if key in section}
        return base.with_hps(**changes)


    def agent_config( self, kind: Any = None ) -> AgentConfig:

        # The ddqn section is the base for every agent kind; td3 keys override it for TD3

        kind = AgentKind.parse(kind) if kind is not None else self.agent.agent_kind
        config = self.agent.with_hps(agent_kind=kind)

        if kind is AgentKind.DISCRETE_TD3:

            td3_defaults = AgentConfig.for_kind(kind)
            config = config.with_hps(learning_rate=td3_defaults.learning_rate, activation=td3_defaults.activation)
            config = self._agent_from_section(self.td3_overrides, config)

            if self.td3_overrides.get('one_hot_encoded_actions', False):
                raise ConfigurationError("td3.one_hot_encoded_actions: only soft (False) action inputs are supported")

        return config


    def resolve_workers( self, cli_workers: Optional[int] = None ) -> int:

        # SEFORGE_THREADS > --workers > runtime.workers > physical cores

        env_value = os.getenv(THREADS_ENV_VAR)

        if env_value:

            try:
                workers = int(env_value)
            except ValueError:
                raise ConfigurationError(f"{THREADS_ENV_VAR} must be an integer, got {env_value!r}")

        elif cli_workers is not None:
            workers = cli_workers

        elif self.runtime.workers is not None:
            workers = int(self.runtime.workers)

        else:
            workers = default_worker_count()

        if workers < 1:
            raise ConfigurationError(f"Worker count must be >= 1, got {workers}")

        return workers


    def validate( self ) -> None:

        problems = []
        problems += self.nes.validate()
        problems += self.training.validate()
        problems += self.hp_variation.validate()

        for kind in AgentKind:
            problems += [f"{kind.value}: {problem}" for problem in self.agent_config(kind).validate()]

        try:
            self.task.spec
        except ConfigurationError as e:
            problems.append(str(e))

        if self.runtime.executor not in ('process', 'thread'):
            problems.append(f"runtime.executor must be 'process' or 'thread', got {self.runtime.executor}")

        if self.se.hidden_layers < 1 or self.se.hidden_size < 1:
            problems.append("se.hidden_layers and se.hidden_layer_size must be >= 1")

        if problems:
            raise ConfigurationError("Invalid configuration:\n    - " + "\n    - ".join(problems))


    def to_dict( self ) -> Dict[str, Any]:

        # Effective configuration in the file layout

        agent = self.agent

        return {

            'task': {'name': self.task.name},
            'nes': {
                'step_size': self.nes.step_size,
                'std_dev': self.nes.std_dev,
                'mirrored_sampling': self.nes.mirrored,
                'score_transformation': self.nes.score_transformation.value,
                'population_size': self.nes.population_size,
                'outer_loops': self.nes.outer_loops,
                'hp_variation': self.nes.hp_variation,
                'early_stop_patience': self.nes.early_stop_patience,
                'evaluate_mean': self.nes.evaluate_mean
            },
            'se': {
                'hidden_layers': self.se.hidden_layers,
                'hidden_layer_size': self.se.hidden_size,
                'activation_function': self.se.activation.value
            },
            'ddqn': {
                'agent_kind': agent.agent_kind.value,
                'initial_episodes': agent.initial_episodes,
                'batch_size': agent.batch_size,
                'learning_rate': agent.learning_rate,
                'target_network_update_rate': agent.target_update_rate,
                'discount_factor': agent.discount,
                'initial_epsilon': agent.eps_init,
                'minimal_epsilon': agent.eps_min,
                'epsilon_decay_factor': agent.eps_decay,
                'hidden_layers': agent.hidden_layers,
                'hidden_layer_size': agent.hidden_size,
                'activation_function': agent.activation.value,
                'replay_buffer_size': agent.replay_buffer_size
            },
            'td3': dict(self.td3_overrides),
            'training': {
                'max_train_episodes': self.training.max_episodes,
                'early_out_num': self.training.early_out_num,
                'early_out_diff': self.training.early_out_diff,
                'test_episodes': self.training.test_episodes,
                'stop_heuristics': self.training.stop_heuristics
            },
            'hp_variation': {
                'learning_rate': list(self.hp_variation.learning_rate),
                'batch_size': list(self.hp_variation.batch_size),
                'hidden_size': list(self.hp_variation.hidden_size),
                'hidden_layer': list(self.hp_variation.hidden_layers)
            },
            'experiment': asdict(self.experiment),
            'runtime': asdict(self.runtime),
            'logging': asdict(self.logging)
        }


    def save( self, path: Path ) -> None:

        with open(path, 'w', encoding='utf-8') as f:

            yaml.dump(

                self.to_dict(),
                f,
                default_flow_style=False,
                sort_keys=False,
                indent=2,
                allow_unicode=True
            )
