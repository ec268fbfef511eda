"""Command-line entry point, ``ness <task> --config <path>``."""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from ness_geometry import __version__
from ness_geometry.cli.config import FORMATS, TASKS, load_config, parse_config
from ness_geometry.cli.run import SCHEMA_VERSION, run, write_record
from ness_geometry.errors import NessError

logger = logging.getLogger("ness_geometry")


def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the ``ness`` command."""
    parser = argparse.ArgumentParser(
        prog="ness",
        description=(
            "Steady states, fidelity metric and gaps of quadratic fermionic "
            "Lindbladians."
        ),
    )
    parser.add_argument("task", choices=TASKS, help="What to compute.")
    parser.add_argument("--config", help="Flat key=value configuration file.")
    parser.add_argument("--out", help="Output path; standard output if omitted.")
    parser.add_argument("--format", choices=FORMATS, help="Output format.")
    parser.add_argument(
        "--workers",
        type=int,
        help="Sweep threads (default: NESS_WORKERS, else CPU count).",
    )
    parser.add_argument("--seed", type=int, help="Seed of randomized checks.")
    parser.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a configuration entry; may be repeated.",
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v", "--verbose", action="store_true", help="Log debug messages."
    )
    verbosity.add_argument(
        "-q", "--quiet", action="store_true", help="Log warnings and errors only."
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__} (schema {SCHEMA_VERSION})",
    )
    return parser


def _overrides(args: argparse.Namespace) -> List[str]:
    overrides = [f"task={args.task}"]
    if args.format is not None:
        overrides.append(f"format={args.format}")
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    return overrides + list(args.param)


def _report(err: BaseException, code: int) -> None:
    error = {"error": type(err).__name__, "message": str(err), "exit_code": code}
    sys.stderr.write(json.dumps(error) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return its exit code.

    Parameters
    ----------
    argv : Sequence[str], optional
        Arguments without the program name. Defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        0 on success, otherwise the ``exit_code`` of the raised error.
    """
    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        overrides = _overrides(args)
        if args.config is not None:
            config = load_config(args.config, overrides)
        else:
            config = parse_config("", overrides)
        record = run(config, args.workers)
        out = args.out or config.out
        if out is None:
            write_record(record, sys.stdout, config.output_format)
        else:
            with open(out, "w", encoding="utf-8", newline="") as handle:
                write_record(record, handle, config.output_format)
            logger.info("Wrote %s", out)
        return record.exit_code
    except NessError as err:
        logger.error("%s", err)
        _report(err, err.exit_code)
        return err.exit_code
    except Exception as err:
        logger.exception("Unexpected failure")
        _report(err, 1)
        return 1


if __name__ == "__main__":
    sys.exit(main())
