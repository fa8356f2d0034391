"""Command-line entry point.

Subcommands:
    run                simulate one scenario, write CSVs + summary + figures
    compare            run all three controller variants over a seed list
    replay-experiment  nine-robot differential-drive replay
    version            print the package version

Exit codes: 0 success, 1 configuration error, 2 simulation fault, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import ALL_KEYS, ConfigError, parse_config
from .scenario import run_comparison, run_scenario, write_replay_outputs
from .simulator import SimulationFault
from .unicycle import DEFAULT_K_OMEGA, replay_experiment

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIM_FAULT = 2
EXIT_IO = 3


def _add_config_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("config", nargs="?", default=None,
                        help="path to a key = value config file")
    for key in sorted(ALL_KEYS):
        parser.add_argument(f"--{key}", default=None, metavar="VALUE",
                            help=f"override config key '{key}'")
    parser.add_argument("--no-plots", action="store_true",
                        help="skip rendering figures")


def _load_config(args: argparse.Namespace):
    text = ""
    if args.config is not None:
        text = Path(args.config).read_text()
    overrides = {key: getattr(args, key) for key in ALL_KEYS
                 if getattr(args, key, None) is not None}
    return parse_config(text, overrides)


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--seeds must be comma-separated integers, got '{text}'") \
            from None
    if not seeds:
        raise ConfigError("--seeds must name at least one seed")
    return seeds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flocksim", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario")
    _add_config_arguments(p_run)

    p_cmp = sub.add_parser("compare", help="three-variant comparison over seeds")
    _add_config_arguments(p_cmp)
    p_cmp.add_argument("--seeds", default=None, metavar="S1,S2,...",
                       help="seeds to compare (default: the config seed)")

    p_replay = sub.add_parser("replay-experiment",
                              help="nine-robot differential-drive replay")
    p_replay.add_argument("--seed", type=int, default=1)
    p_replay.add_argument("--k-omega", type=float, default=DEFAULT_K_OMEGA,
                          help="heading proportional gain (1/s)")
    p_replay.add_argument("--out", default=None,
                          help="output directory (default: replay_seed<SEED>)")
    p_replay.add_argument("--no-plots", action="store_true")

    sub.add_parser("version", help="print the version")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "version":
            print(__version__)
            return EXIT_OK
        if args.command == "run":
            config = _load_config(args)
            result = run_scenario(config, plots=not args.no_plots)
            print(f"run complete: out={config.out} "
                  f"final_gamma={result.summary['final_gamma']}")
            return EXIT_OK
        if args.command == "compare":
            config = _load_config(args)
            seeds = _parse_seeds(args.seeds) if args.seeds else [config.seed]
            report = run_comparison(config, seeds, plots=not args.no_plots)
            faults = sum(c.status != "ok" for c in report.cells)
            print(f"compare complete: {len(report.cells)} cells, {faults} faulted, "
                  f"out={config.out}")
            return EXIT_SIM_FAULT if faults else EXIT_OK
        if args.command == "replay-experiment":
            out = Path(args.out) if args.out else Path(f"replay_seed{args.seed}")
            result = replay_experiment(args.seed, k_omega=args.k_omega)
            write_replay_outputs(result, out, plots=not args.no_plots)
            gamma = result.final_gamma
            print(f"replay complete: out={out} "
                  f"final_gamma={'nan' if gamma is None else repr(gamma)}")
            return EXIT_OK
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationFault as err:
        print(f"simulation fault: {err}", file=sys.stderr)
        return EXIT_SIM_FAULT
    except OSError as err:
        target = getattr(err, "filename", None)
        where = f" ({target})" if target else ""
        print(f"i/o error: {err}{where}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
