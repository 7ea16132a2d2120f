"""Command-line experiment driver.

    llsoliton <subcommand> [--config FILE] [--out DIR] [--seed N]
                           [--workers N] [--override key=value ...]

Subcommands: simulate, spectrum, modulate, monotonicity, virial, phase,
sweep.  Exit status: 0 when every hard assertion passes, 1 on assertion
failure, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .experiments import run_experiment

_SUBCOMMANDS = ("simulate", "spectrum", "modulate", "monotonicity", "virial",
                "phase", "sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="llsoliton",
                                     description="dark-soliton numerical laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, help="flat key=value config file")
        p.add_argument("--out", default=None, help="output directory for CSV/JSON")
        p.add_argument("--seed", type=int, default=None, help="perturbation seed")
        p.add_argument("--workers", type=int, default=1, help="sweep worker count")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE", help="config override (repeatable)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(path=args.config, overrides=args.override,
                          seed=args.seed, experiment=args.command)
    except (ConfigError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        rep = run_experiment(cfg, out_dir=args.out, workers=args.workers)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    for name in sorted(rep.assertions):
        a = rep.assertions[name]
        status = "PASS" if a["passed"] else "FAIL"
        tol = f" (tol {a['tolerance']})" if a["tolerance"] is not None else ""
        print(f"[{status}] {name}: {a['value']}{tol}")
    print(f"experiment {rep.experiment}: {'PASS' if rep.passed else 'FAIL'}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
