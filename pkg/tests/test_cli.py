import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from envs.types import CARTPOLE
from experiments.export import EVALS_COLUMNS
from network.mlp import Activation
from service.service_handler import EXIT_CONFIG, EXIT_ERROR, EXIT_OK, build_parser, cli_main
from synthetic.checkpoint import save_se
from synthetic.environment import build_se_spec


MICRO = str(Path(__file__).parent.parent / "configs" / "micro.yaml")


@pytest.fixture
def checkpoint( tmp_path ):

    spec = build_se_spec(CARTPOLE, (16,), Activation.LEAKY_RELU, np.random.default_rng(7), run_seed=7)
    path = tmp_path / "se_a.json"
    save_se(spec, path)
    return path


def run( *argv ) -> int:

    return cli_main([str(arg) for arg in argv])


def test_parser_knows_every_subcommand():

    parser = build_parser()

    for command in ["train-se", "eval-se", "baseline", "robustness", "transfer", "histograms", "verify", "show-config"]:
        assert parser.parse_args([command]).command == command


def test_usage_errors_exit_with_two( capsys ):

    assert run("fly") == EXIT_CONFIG
    assert run("transfer", "--target", "ddqn") == EXIT_CONFIG
    assert run("train-se", "--workers", "0") == EXIT_CONFIG


def test_missing_config_exits_with_two( tmp_path ):

    assert run("show-config", "--config", tmp_path / "absent.yaml") == EXIT_CONFIG


def test_invalid_config_exits_with_two( write_config ):

    path = write_config({'nes': {'population_size': 5}})

    assert run("show-config", "--config", path) == EXIT_CONFIG


def test_show_config_prints_the_tree( capsys ):

    assert run("show-config", "--config", MICRO, "--workers", "2") == EXIT_OK

    out = capsys.readouterr().out
    assert "SEForge Configuration" in out
    assert "workers: 2" in out


def test_verify_selected_checks( tmp_path, capsys ):

    assert run("verify", "--config", MICRO, "--check", "heuristics", "--check", "nes-math", "--out", tmp_path, "--quiet") == EXIT_OK
    assert "All 2 checks passed" in capsys.readouterr().out


def test_verify_against_written_fixtures( tmp_path ):

    fixtures = tmp_path / "fixtures"

    assert run("verify", "--config", MICRO, "--check", "physics", "--write-fixtures", fixtures, "--fixtures", fixtures, "--out", tmp_path, "--quiet") == EXIT_OK
    assert len(list(fixtures.glob("*.csv"))) == 20


def test_train_se_writes_run_artifacts( tmp_path ):

    out = tmp_path / "train"

    assert run("train-se", "--config", MICRO, "--workers", "1", "--out", out, "--quiet") == EXIT_OK

    for name in ["run_log.jsonl", "best_se.json", "final_se.json", "config.yaml"]:
        assert (out / name).exists(), name

    assert len((out / "run_log.jsonl").read_text().splitlines()) >= 1


def test_eval_se_writes_results( tmp_path, checkpoint ):

    out = tmp_path / "eval"

    assert run("eval-se", checkpoint, "--config", MICRO, "--n-agents", "2", "--workers", "1", "--out", out, "--quiet") == EXIT_OK

    evals = pd.read_csv(out / "evals.csv")
    assert list(evals.columns) == EVALS_COLUMNS
    assert evals['se_id'].tolist() == ["se_a", "se_a"]

    summary = json.loads((out / "summary.json").read_text())
    assert summary['schema_version'] == 1
    assert summary['n_records'] == 2


def test_eval_se_reports_the_ratio_to_a_baseline( tmp_path, checkpoint ):

    baseline = tmp_path / "baseline"
    out = tmp_path / "eval"

    assert run("baseline", "--config", MICRO, "--n-agents", "2", "--workers", "1", "--out", baseline, "--quiet") == EXIT_OK
    assert run("eval-se", "--se-dir", checkpoint.parent, "--config", MICRO, "--n-agents", "1", "--workers", "1", "--baseline", baseline, "--out", out, "--quiet") == EXIT_OK

    summary = json.loads((out / "summary.json").read_text())
    assert 'train_step_ratio' in summary


def test_robustness_without_solving_ses_fails( tmp_path, checkpoint ):

    assert run("robustness", checkpoint, "--config", MICRO, "--n-agents", "1", "--workers", "1", "--out", tmp_path / "rob", "--quiet") == EXIT_ERROR


def test_suite_without_checkpoints_fails( tmp_path ):

    assert run("eval-se", "--config", MICRO, "--workers", "1", "--out", tmp_path / "eval", "--quiet") == EXIT_ERROR


def test_unreadable_checkpoint_fails_cleanly( tmp_path ):

    assert run("eval-se", tmp_path / "nope.json", "--config", MICRO, "--workers", "1", "--out", tmp_path / "eval", "--quiet") == EXIT_ERROR
