"""Command-line entry point: ``snewton <command> [--config FILE] [--out DIR]``.

Exit codes: 0 success, 2 invalid input, 3 solver failure or no bound state,
4 a physics threshold was breached.
"""

import argparse
import json
import logging
import sys

from . import config as config_mod
from . import fields
from .dynamics import PropagationError
from .experiments import COMMANDS, EXIT_OK, EXIT_SOLVER, EXIT_VALIDATION
from .ground_state import ConvergenceError, NoGroundStateError

log = logging.getLogger("snewton")


def build_parser():
    p = argparse.ArgumentParser(prog="snewton", description="Self-gravitating Schrodinger solver and experiments.")
    p.add_argument("--config", help="YAML or JSON scenario file (defaults apply to missing keys)")
    p.add_argument("--out", default="runs", help="parent directory for run outputs (default: runs)")
    p.add_argument("--workers", type=int, default=1, help="processes for sweeps and FFT threads (default: 1)")
    p.add_argument("--quiet", action="store_true", help="only report errors")
    p.add_argument("command", choices=sorted(COMMANDS))
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    if args.workers < 1:
        log.error("--workers must be >= 1")
        return EXIT_VALIDATION
    fields.FFT_WORKERS = args.workers if args.workers > 1 else None
    try:
        cfg = config_mod.load(args.config) if args.config else config_mod.resolve({})
        record = COMMANDS[args.command](cfg, args.out, workers=args.workers)
    except (config_mod.ConfigError, OSError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_VALIDATION
    except (NoGroundStateError, ConvergenceError, PropagationError) as exc:
        log.error("solver failure: %s", exc)
        return EXIT_SOLVER
    except ValueError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_VALIDATION
    if not args.quiet:
        print(json.dumps({"run_id": record.run_id, "exit_code": record.exit_code, "dir": f"{args.out}/{record.run_id}"}))
    if record.exit_code != EXIT_OK:
        log.error("run finished with exit code %d: %s", record.exit_code, "; ".join(record.failures) or "member failures")
    return record.exit_code


if __name__ == "__main__":
    sys.exit(main())
