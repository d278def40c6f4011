import sys
from pathlib import Path

import numpy as np
import pytest
import yaml


ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT / "src"))

from config.config_manager import AgentConfig, AgentKind, TrainingConfig  # noqa: E402


def pytest_addoption( parser ):

    parser.addoption("--run-slow", action="store_true", default=False, help="run slow and nightly acceptance tests")


def pytest_collection_modifyitems( config, items ):

    if config.getoption("--run-slow"):
        return

    skip = pytest.mark.skip(reason="needs --run-slow")

    for item in items:
        if "slow" in item.keywords or "nightly" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():

    return np.random.default_rng(1234)


@pytest.fixture
def tiny_agent_config():

    def build( kind: AgentKind = AgentKind.DDQN ) -> AgentConfig:

        return AgentConfig.for_kind(kind).with_hps(

            batch_size=8,
            hidden_size=8,
            hidden_layers=1,
            initial_episodes=1,
            replay_buffer_size=1000
        )

    return build


@pytest.fixture
def short_training():

    return TrainingConfig(max_episodes=3, test_episodes=2)


@pytest.fixture
def write_config( tmp_path ):

    def write( data: dict, name: str = "config.yaml" ) -> Path:

        path = tmp_path / name

        with path.open('w', encoding='utf-8') as f:
            yaml.safe_dump(data, f)

        return path

    return write
