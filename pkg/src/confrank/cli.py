"""Command line front end.

Three subcommands: `run` executes the full experiment over one or more
CSV tables and writes the report files, `sweep-lives` tabulates the
measurement/quality trade-off of rank-based sampling across lives
settings, and `synth` generates a synthetic system to CSV.

Exit codes: 0 on success, 1 on configuration errors (bad flags, bad
values), 2 on dataset errors (unreadable or malformed tables).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from confrank import dataset, harness, synthgen
from confrank.errors import ConfrankError, DatasetError

__all__ = ["main"]


class _ConfigExit(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for
    # dataset problems, so route usage errors through exit code 1
    def error(self, message):
        raise _ConfigExit(message)


def _approach_list(text: str) -> tuple:
    out = []
    for raw in text.split(","):
        name = raw.strip().replace("-", "_")
        if name not in harness.APPROACHES:
            raise _ConfigExit(f"unknown approach {raw.strip()!r}")
        if name not in out:
            out.append(name)
    if not out:
        raise _ConfigExit("no approaches given")
    return tuple(out)


def _fraction_triple(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 3:
        raise _ConfigExit("--split needs three comma-separated fractions")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise _ConfigExit(f"bad split fractions {text!r}")


def _lives_list(text: str) -> list:
    try:
        values = [int(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise _ConfigExit(f"bad lives list {text!r}")
    if not values:
        raise _ConfigExit("empty lives list")
    return values


def _add_run_options(sub) -> None:
    sub.add_argument("--data", nargs="+", required=True, metavar="CSV",
                     help="one or more configuration tables")
    sub.add_argument("--approaches",
                     default="progressive,projective,rank-based",
                     help="comma list; rank-based may be spelled with a dash")
    sub.add_argument("--repeats", type=int, default=20)
    sub.add_argument("--lives", type=int, default=3)
    sub.add_argument("--thresh-freq", type=int, default=3)
    sub.add_argument("--split", default="0.4,0.2,0.4",
                     help="training,testing,validation fractions")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--out", required=True, metavar="DIR")
    sub.add_argument("--maximize-perf", action="store_true",
                     help="performance column is higher-is-better; "
                          "negate it at load time")
    sub.add_argument("--with-replacement", action="store_true")
    sub.add_argument("--reset-lives", action="store_true")
    sub.add_argument("--batch-size", type=int, default=1)


def _load_tables(paths, maximize: bool) -> tuple:
    tables = []
    for p in paths:
        try:
            tables.append(dataset.load_table(
                p, name=Path(p).stem, maximize=maximize,
            ))
        except OSError as exc:
            raise DatasetError(f"cannot read {p}: {exc}") from exc
    return tuple(tables)


def _config_from(args) -> harness.ExperimentConfig:
    tables = _load_tables(args.data, args.maximize_perf)
    try:
        return harness.ExperimentConfig(
            tables=tables,
            approaches=_approach_list(args.approaches),
            repeats=args.repeats,
            fractions=_fraction_triple(args.split),
            lives=args.lives,
            thresh_freq=args.thresh_freq,
            seed=args.seed,
            jobs=args.jobs,
            batch_size=args.batch_size,
            with_replacement=args.with_replacement,
            reset_lives=args.reset_lives,
        )
    except ValueError as exc:
        raise _ConfigExit(str(exc))


def _cmd_run(args) -> int:
    config = _config_from(args)
    report = harness.run_experiment(config)
    paths = harness.emit_outputs(report, args.out)
    for name in sorted(paths):
        print(paths[name])
    return 0


def _cmd_sweep_lives(args) -> int:
    config = _config_from(args)
    rows = harness.sweep_lives(config, _lives_list(args.lives_values))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["dataset,lives,median_measurements,median_best_rank"]
    for r in rows:
        lines.append(",".join([
            r["dataset"], str(r["lives"]),
            repr(float(r["median_measurements"])),
            repr(float(r["median_best_rank"])),
        ]))
    path = out / "sweep.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(path)
    return 0


def _cmd_synth(args) -> int:
    if args.binary < 1 and args.numeric < 1:
        raise _ConfigExit("need at least one feature")
    rng = np.random.default_rng(args.seed)
    try:
        model = synthgen.random_model(
            args.binary + args.numeric, rng,
            interactions=args.interactions,
            threeway_terms=args.threeway,
        )
        spec = synthgen.SynthSpec(
            n_binary=args.binary, model=model, n_numeric=args.numeric,
            noise=args.noise, seed=args.seed, cap=args.cap,
            name=Path(args.out).stem,
        )
        table = synthgen.generate(spec)
    except ValueError as exc:
        raise _ConfigExit(str(exc))
    Path(args.out).write_text(dataset.to_csv(table), encoding="utf-8")
    print(args.out)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="confrank", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run the sampling experiment")
    _add_run_options(run)
    run.set_defaults(func=_cmd_run)

    sweep = subs.add_parser(
        "sweep-lives",
        help="rank-based measurement/quality trade-off per lives value",
    )
    _add_run_options(sweep)
    sweep.add_argument("--lives-values", required=True, metavar="LIST",
                       help="comma list of lives settings, e.g. 2,3,4,5,10")
    sweep.set_defaults(func=_cmd_sweep_lives)

    synth = subs.add_parser("synth", help="generate a synthetic system")
    synth.add_argument("--binary", type=int, default=8)
    synth.add_argument("--numeric", type=int, default=0)
    synth.add_argument("--interactions", default="dense",
                       choices=("none", "sparse", "dense"))
    synth.add_argument("--threeway", type=int, default=0,
                       help="number of three-way interaction terms")
    synth.add_argument("--noise", type=float, default=0.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--cap", type=int, default=10_000,
                       help="enumerate the full space up to this many rows")
    synth.add_argument("--out", required=True, metavar="CSV")
    synth.set_defaults(func=_cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _ConfigExit as exc:
        print(f"confrank: {exc}", file=sys.stderr)
        return 1
    except DatasetError as exc:
        print(f"confrank: {exc}", file=sys.stderr)
        return 2
    except ConfrankError as exc:
        # remaining library errors stem from requested settings
        print(f"confrank: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
