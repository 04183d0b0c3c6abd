"""Command-line entry point: ``rayarray {beam-pattern,single-user,multi-user,cost}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import CapExceededError, ConstraintViolationError, InvalidArgumentError
from .experiments import load_config, parse_config_text, run

SUBCOMMANDS = {
    "beam-pattern": "beam_pattern",
    "single-user": "single_user",
    "multi-user": "multi_user",
    "cost": "cost",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rayarray",
        description="Ray antenna array vs DFT-codebook HBF experiments (CSV output).")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="flat key = value config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
        p.add_argument("--methods", help="comma list of greedy,exhaustive,top_magnitude")
        p.add_argument("--pattern", choices=("isotropic", "directional", "both"))
        p.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key (repeatable)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    experiment = SUBCOMMANDS[args.command]
    try:
        overrides = parse_config_text("\n".join(args.sets)) if args.sets else {}
        if args.methods is not None:
            overrides["methods"] = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        for key in ("seed", "trials", "out", "pattern"):
            value = getattr(args, key)
            if value is not None:
                overrides[key] = value
        overrides["experiment"] = experiment
        config = load_config(args.config, **overrides)
        result = run(config)
    except CapExceededError as exc:
        print(f"rayarray: error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, InvalidArgumentError, ConstraintViolationError, OSError) as exc:
        print(f"rayarray: config error: {exc}", file=sys.stderr)
        return 2
    if config.out is None:
        sys.stdout.write(result.csv_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
