"""Command-line entry point.

Subcommands: gs (ground-state summary), prop (one propagation run),
fig1 / fig2 (trajectory sets for the two reproduction figures),
suppv (scaled-approximation ground-state study), check (invariant suite).
Every command accepts --config PATH, --out DIR and repeatable
--override section.key=value flags.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .runconfig import ConfigError, parse_config
from .runner import (run_checks, run_fig1, run_fig2, run_ground_state,
                     run_propagation, run_suppv, write_suppv_outputs)


def _load_config(args) -> "RunConfig":
    text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    cfg = parse_config(text, overrides=args.override or [])
    if args.out:
        cfg.sections["output"]["directory"] = args.out
    return cfg


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="run-configuration file")
    p.add_argument("--out", help="output directory (overrides output.directory)")
    p.add_argument("--override", action="append", metavar="SECTION.KEY=VALUE",
                   help="override one configuration value (repeatable)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cqedlab",
                                     description="cavity-QED dressed-orbital laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("gs", "ground-state energies and gaps"),
                        ("prop", "propagate the configured solver"),
                        ("fig1", "two-site dipole trajectory set"),
                        ("fig2", "helium cavity trajectory set"),
                        ("suppv", "scaled-approximation ground-state study"),
                        ("check", "run the invariant check suite")):
        _add_common(sub.add_parser(name, help=help_))

    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "gs":
            out = run_ground_state(cfg)
            for key, val in out.items():
                print(f"{key} = {val}")
        elif args.command == "prop":
            res = run_propagation(cfg)
            print(f"wrote {res['label']}_* to {res['outdir']}")
        elif args.command == "fig1":
            for res in run_fig1(cfg):
                print(f"wrote {res['label']}_* to {res['outdir']}")
        elif args.command == "fig2":
            for res in run_fig2(cfg):
                print(f"wrote {res['label']}_* to {res['outdir']}")
        elif args.command == "suppv":
            res = run_suppv(cfg)
            outdir = Path(cfg["output.directory"])
            write_suppv_outputs(outdir, res, cfg)
            for name, row in res["fluctuations"].items():
                extra = f"  change={row['change']:+.5f}" if "change" in row else ""
                print(f"{name:10s} E={row['energy']:.8f}{extra}")
            print(f"wrote suppv_* to {outdir}")
        elif args.command == "check":
            failures = 0
            for name, ok, detail in run_checks():
                print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
                failures += 0 if ok else 1
            return 1 if failures else 0
    except Exception as exc:  # surface solver errors as nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
