"""

 Decoy-state QKD simulator

 Analytic security checks, Monte Carlo sessions and parameter sweeps for
 decoy-state BB84 against photon-number-splitting adversaries.

"""

import argparse
import sys

from src.constants.common import EXIT_CODES, SWEEP_PARAMS
from src.entry import entry_point
from src.logger import logger
from src.utils.exceptions import DecoyStateError


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the error code instead of argparse's 2"""

    def error(self, message):
        self.print_usage(sys.stderr)
        logger.critical(f"Usage error: {message}")
        sys.exit(EXIT_CODES.ERROR)


def add_global_arguments(argparser):
    argparser.add_argument(
        "-c",
        "--config",
        default=None,
        required=False,
        type=str,
        dest="config_path",
        help="Specify a config json file. Defaults are used for missing keys.",
    )

    argparser.add_argument(
        "--pulses",
        default=None,
        required=False,
        type=int,
        dest="pulses",
        help="Override the number of pulses in the session.",
    )

    argparser.add_argument(
        "--seed",
        default=None,
        required=False,
        type=int,
        dest="seed",
        help="Override the random seed. A missing seed is generated and echoed.",
    )

    argparser.add_argument(
        "--alpha",
        default=None,
        required=False,
        type=float,
        dest="alpha",
        help="Override the probability of replacing a signal pulse by a decoy pulse.",
    )

    argparser.add_argument(
        "--n-max",
        default=None,
        required=False,
        type=int,
        dest="n_max",
        help="Override the photon number truncation bound.",
    )

    argparser.add_argument(
        "-o",
        "--output",
        default=None,
        required=False,
        dest="output",
        help="Write the report (or sweep CSV) to this file instead of stdout.",
    )

    argparser.add_argument(
        "-v",
        "--verbose",
        required=False,
        dest="verbose",
        action="store_true",
        help="Enables debug logging",
    )

    argparser.add_argument(
        "-q",
        "--quiet",
        required=False,
        dest="quiet",
        action="store_true",
        help="Only log warnings and errors",
    )


def build_parser():
    # construct the argument parse and parse the arguments
    argparser = ArgumentParser(
        description="Decoy-state BB84 security calculator and simulator"
    )
    subparsers = argparser.add_subparsers(dest="command", required=True)

    analyze_parser = subparsers.add_parser(
        "analyze", help="Closed-form yields and security condition, no random draws"
    )
    add_global_arguments(analyze_parser)

    simulate_parser = subparsers.add_parser(
        "simulate", help="Monte Carlo session with abort test and empirical check"
    )
    add_global_arguments(simulate_parser)

    sweep_parser = subparsers.add_parser(
        "sweep", help="Analytic check over a range of one parameter, as CSV"
    )
    add_global_arguments(sweep_parser)
    sweep_parser.add_argument(
        "--param",
        required=True,
        choices=SWEEP_PARAMS,
        dest="param",
        help="Scalar parameter to sweep.",
    )
    sweep_parser.add_argument("--start", required=True, type=float, dest="start")
    sweep_parser.add_argument("--stop", required=True, type=float, dest="stop")
    sweep_parser.add_argument(
        "--step",
        default=None,
        required=False,
        type=float,
        dest="step",
        help="Linear step between sweep points.",
    )
    sweep_parser.add_argument(
        "--num",
        default=None,
        required=False,
        type=int,
        dest="num",
        help="Number of sweep points, instead of --step.",
    )
    sweep_parser.add_argument(
        "--log",
        required=False,
        dest="log_scale",
        action="store_true",
        help="Space the --num points geometrically (for loss sweeps over decades).",
    )
    return argparser


def parse_args(argv=None):
    argparser = build_parser()
    (
        args,
        unknown,
    ) = argparser.parse_known_args(argv)

    args = vars(args)

    if len(unknown) > 0:
        logger.warning(f"\nError: Unknown arguments: {unknown}")
        argparser.print_help(sys.stderr)
        exit(EXIT_CODES.ERROR)
    return args


def entry_point_for_args(args):
    try:
        return entry_point(args["command"], args)
    except DecoyStateError as error:
        logger.error(f"{error.__class__.__name__}: {error}")
        return EXIT_CODES.ERROR


if __name__ == "__main__":
    args = parse_args()
    sys.exit(entry_point_for_args(args))
