#!/usr/bin/env python3
"""
Command-line service handler for SEForge.
Parses arguments, builds the orchestrator and maps failures onto exit codes.
"""

import argparse
from pathlib import Path
from typing import Optional, Sequence

from config.config_manager import AgentKind
from service.config_display import ConfigDisplay
from service.config_validator import ConfigValidator
from service.forge_core import SEForge
from utils.error_handler import ConfigurationError, ErrorHandler, SEForgeError
from utils.logger import Logger
from verification.checks import CHECKS


VERSION = "1.0.0"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_VERIFY = 3


def _positive_int( value: str ) -> int:

    number = int(value)

    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")

    return number


def build_parser() -> argparse.ArgumentParser:

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', metavar='FILE', type=Path,
                        help='YAML configuration file (defaults apply when omitted)')
    common.add_argument('--seed', type=int, default=1, metavar='N',
                        help='Run seed (default: 1)')
    common.add_argument('--workers', type=_positive_int, metavar='N',
                        help='Worker processes; SEFORGE_THREADS takes precedence')
    common.add_argument('--out', type=Path, metavar='DIR',
                        help='Output directory (default: runs/<command>)')
    common.add_argument('--quiet', action='store_true',
                        help='Log to the file only')

    suite = argparse.ArgumentParser(add_help=False)
    suite.add_argument('checkpoints', nargs='*', type=Path, metavar='SE',
                       help='SE checkpoint files')
    suite.add_argument('--se-dir', type=Path, metavar='DIR',
                       help='Directory of SE checkpoints or NES run directories')
    suite.add_argument('--n-se', type=_positive_int, metavar='N',
                       help='Use only the first N SEs')
    suite.add_argument('--n-agents', type=_positive_int, metavar='N',
                       help='Agents per SE (default: experiment.n_agents)')
    suite.add_argument('--baseline', type=Path, metavar='DIR',
                       help='Baseline results directory for the train-step ratio')

    parser = argparse.ArgumentParser(

        prog="SEForge",
        description="SEForge - learning synthetic environments with evolution strategies",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')

    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    train = commands.add_parser('train-se', parents=[common], help='Learn synthetic environments with NES')
    train.add_argument('--n-se', type=_positive_int, default=1, metavar='N',
                       help='Independent NES runs with seeds seed..seed+N-1')

    evaluate = commands.add_parser('eval-se', parents=[common, suite], help='Evaluate SE checkpoints with default-HP agents')
    evaluate.add_argument('--agent', choices=[kind.value for kind in AgentKind],
                          help='Agent kind (default: ddqn.agent_kind)')

    baseline = commands.add_parser('baseline', parents=[common], help='Train agents with varying HPs on the real task')
    baseline.add_argument('--n-agents', type=_positive_int, metavar='N',
                          help='Number of agents (default: experiment.n_baseline)')
    baseline.add_argument('--agent', choices=[kind.value for kind in AgentKind],
                          help='Agent kind (default: ddqn.agent_kind)')

    commands.add_parser('robustness', parents=[common, suite], help='Train DDQN agents with varying HPs on an SE set')

    transfer = commands.add_parser('transfer', parents=[common, suite], help='Train other agent kinds on a DDQN-learned SE set')
    transfer.add_argument('--target', choices=[AgentKind.DUELING_DDQN.value, AgentKind.DISCRETE_TD3.value],
                          default=AgentKind.DUELING_DDQN.value, help='Target agent kind')

    commands.add_parser('histograms', parents=[common, suite], help='Compare SE and real transition histograms')

    verify = commands.add_parser('verify', parents=[common], help='Run the oracle checks')
    verify.add_argument('--check', action='append', choices=list(CHECKS), dest='checks',
                        help='Run only this check (repeatable)')
    verify.add_argument('--fixtures', type=Path, metavar='DIR',
                        help='Replay trajectory fixtures from DIR instead of generating them')
    verify.add_argument('--write-fixtures', type=Path, metavar='DIR',
                        help='Regenerate the trajectory fixture set into DIR first')

    show = commands.add_parser('show-config', parents=[common], help='Print the effective configuration')
    show.add_argument('--check', action='store_true',
                      help='Also check installed requirements')

    return parser


class ServiceHandler:

    def __init__( self, args: argparse.Namespace ):

        self.args = args
        self.validator = ConfigValidator(args.config)

    def _forge( self ) -> SEForge:

        config = self.validator.load()
        out_dir = self.args.out or Path("runs") / self.args.command

        return SEForge(config, self.args.seed, self.args.workers, out_dir, self.args.quiet)

    def _specs( self, forge: SEForge ):

        return forge.load_se_set(self.args.checkpoints, self.args.se_dir, self.args.n_se)

    def run( self ) -> int:

        command = self.args.command.replace('-', '_')
        return getattr(self, f"cmd_{command}")()

    def cmd_train_se( self ) -> int:

        self._forge().train_se(self.args.n_se)
        return EXIT_OK

    def cmd_eval_se( self ) -> int:

        forge = self._forge()
        forge.eval_se(self._specs(forge), self.args.n_agents, self.args.agent, self.args.baseline)
        return EXIT_OK

    def cmd_baseline( self ) -> int:

        self._forge().baseline(self.args.n_agents, self.args.agent)
        return EXIT_OK

    def cmd_robustness( self ) -> int:

        forge = self._forge()
        forge.robustness(self._specs(forge), self.args.n_agents, self.args.baseline)
        return EXIT_OK

    def cmd_transfer( self ) -> int:

        forge = self._forge()
        forge.transfer(self._specs(forge), self.args.target, self.args.n_agents, self.args.baseline)
        return EXIT_OK

    def cmd_histograms( self ) -> int:

        forge = self._forge()
        forge.histograms(self._specs(forge), self.args.n_agents)
        return EXIT_OK

    def cmd_verify( self ) -> int:

        results = self._forge().verify(self.args.checks, self.args.fixtures, self.args.write_fixtures)
        failed = [result.name for result in results if not result.passed]

        if failed:
            print(f"[x] Verification failed: {', '.join(failed)}")
            return EXIT_VERIFY

        print(f"[+] All {len(results)} checks passed")
        return EXIT_OK

    def cmd_show_config( self ) -> int:

        config = self.validator.load()
        ConfigDisplay(config, config.resolve_workers(self.args.workers)).show_config()

        if self.args.check and not self.validator.check_requirements():
            return EXIT_ERROR

        return EXIT_OK


def cli_main( argv: Optional[Sequence[str]] = None ) -> int:

    parser = build_parser()

    try:
        args = parser.parse_args(list(argv) if argv is not None else None)

    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help / --version
        return int(e.code or 0)

    try:
        return ServiceHandler(args).run()

    except ConfigurationError as e:
        print(f"[x] Configuration error: {e}")
        return EXIT_CONFIG

    except SEForgeError as e:
        ErrorHandler(Logger.attach()).handle_error(e, args.command)
        print(f"[x] {args.command} failed: {e}")
        return EXIT_ERROR

    except KeyboardInterrupt:
        print(f"\n[*] {args.command} stopped by user")
        return EXIT_ERROR
