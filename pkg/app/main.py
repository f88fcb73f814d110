import argparse
import logging
import sys
from typing import List, Optional

from app.cli import cmd_check, cmd_plot, cmd_simulate
from app.controller import Logic
from app.errors import TubeSwarmError
from app.settings import settings

logger = logging.getLogger("app")


def _times(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated seconds, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tubeswarm", description="Swarm passing through virtual tubes")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="run a scenario and write trace files")
    simulate.add_argument("--scenario", required=True, help="scenario file or bundled scenario name")
    simulate.add_argument("--out", default=settings.output_dir, help="output directory")
    simulate.add_argument("--dt-override", type=float, default=None, help="step size in seconds")
    simulate.add_argument("--logic-override", choices=[logic.value for logic in Logic], default=None)
    simulate.add_argument("--snapshot-times", type=_times, default=None, help="e.g. 0,5,10")

    check = sub.add_parser("check", help="validate a scenario and run the oracles on its tube")
    check.add_argument("--scenario", required=True, help="scenario file or bundled scenario name")

    plot = sub.add_parser("plot", help="draw figures from a trace directory")
    plot.add_argument("--trace-dir", required=True, help="directory written by simulate")
    plot.add_argument("--out", required=True, help="output SVG path")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=settings.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "simulate":
            return cmd_simulate(args.scenario, args.out, args.dt_override, args.logic_override, args.snapshot_times)
        if args.command == "check":
            return cmd_check(args.scenario)
        return cmd_plot(args.trace_dir, args.out)
    except TubeSwarmError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
