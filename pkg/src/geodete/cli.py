"""Command line front end.

    geodete verify <job>         run the stages listed in the job (default: all)
    geodete search <job>         enumerate actions and validate the canonical one
    geodete realize <job>        validate, extend, realize polyhedra
    geodete census <job>         validate, extend, realize, boundary census
    geodete catalog list
    geodete catalog run <name>

``<job>`` is a job file or a catalog name. Exit codes: 0 all verifications
passed, 1 a verification failed (certificate still written), 2 input error,
3 resource or solver error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .errors import InputError
from .permgroup import BOUND_ENV_VAR
from .jobs import DEFAULT_TOLERANCES, STAGES, catalog_job, catalog_names, load_job
from .pipeline import EXIT_INPUT, run_job, summary

COMMAND_STAGES = {
    "search": ("validate",),
    "realize": ("validate", "extend_t1", "extend_t2", "realize"),
    "census": ("validate", "extend_t1", "extend_t2", "realize", "census"),
}


def _tolerance(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep or key not in DEFAULT_TOLERANCES:
        raise argparse.ArgumentTypeError(
            f"expected NAME=VALUE with NAME in {', '.join(DEFAULT_TOLERANCES)}")
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not number > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return key, number


def _add_run_options(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, help="solver restart seed (overrides the job)")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="NAME=VALUE",
                   help="override a tolerance; may be repeated")
    p.add_argument("--max-group-order", type=int,
                   help=f"enumeration bound (default from ${BOUND_ENV_VAR} or 10^6)")
    p.add_argument("--out", help="certificate path (default <name>.cert.json)")
    p.add_argument("--stage", action="append", choices=STAGES,
                   help="run only these stages; may be repeated")
    p.add_argument("--quiet", action="store_true", help="no summary on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geodete", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("verify", "run the job's stages"),
                       ("search", "search for actions and validate the first"),
                       ("realize", "realize the extension polyhedra"),
                       ("census", "compute the boundary census")):
        p = sub.add_parser(name, help=text)
        p.add_argument("job", help="job file or catalog name")
        _add_run_options(p)
    cat = sub.add_parser("catalog", help="built-in example jobs")
    cat_sub = cat.add_subparsers(dest="catalog_command", required=True)
    cat_sub.add_parser("list", help="list catalog entries")
    run = cat_sub.add_parser("run", help="run a catalog entry")
    run.add_argument("name")
    _add_run_options(run)
    return parser


def _apply_overrides(spec, args):
    if args.seed is not None:
        if args.seed < 0:
            raise InputError("--seed must be non-negative")
        spec = replace(spec, seed=args.seed)
    if args.tol:
        tolerances = dict(spec.tolerances)
        tolerances.update(dict(args.tol))
        spec = replace(spec, tolerances=tolerances)
    if args.max_group_order is not None:
        if args.max_group_order < 1:
            raise InputError("--max-group-order must be positive")
        spec = replace(spec, max_group_order=args.max_group_order)
    if args.out:
        spec = replace(spec, output=args.out)
    if args.stage:
        spec = spec.with_stages(args.stage)
    elif args.command in COMMAND_STAGES:
        spec = spec.with_stages(COMMAND_STAGES[args.command])
    return spec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "catalog" and args.catalog_command == "list":
        for name in catalog_names():
            job = catalog_job(name)
            print(f"{name}\t{json.dumps(job.group, sort_keys=True)}\t{list(job.signature)}")
        return 0
    try:
        spec = catalog_job(args.name) if args.command == "catalog" else load_job(args.job)
        spec = _apply_overrides(spec, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    status, cert, text = run_job(spec)
    if cert is None:
        print(text, file=sys.stderr)
        return status
    out = Path(spec.output or f"{spec.name}.cert.json")
    out.write_text(text)
    if not args.quiet:
        for line in summary(cert):
            print(line)
        print(f"certificate written to {out}")
    return status


if __name__ == "__main__":
    sys.exit(main())
