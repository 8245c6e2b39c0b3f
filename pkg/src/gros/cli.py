"""``gros <experiment>``: run a simulation study, write CSV and an SVG summary.

Settings are layered: built-in defaults, then the ``--config`` file (a path
or a bundled preset name such as ``regression-s16-xi9``), then flags.
Exit status is 0 on success, 2 for usage errors and 3 for resource errors.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments as ex
from .topology import ResourceLimitError

EXIT_USAGE = 2
EXIT_RESOURCE = 3

# flag -> parameter name in the experiment block
PARAM_FLAGS = {
    "--k-groups": ("k_groups", int),
    "--delta": ("delta", float),
    "--lambda": ("lambda", float),
    "--horizon": ("horizon", int),
    "--warmup": ("warmup", int),
    "--bandwidth": ("bandwidth", float),
    "--sigma": ("sigma", float),
    "--xi": ("xi", float),
    "--threshold": ("threshold", float),
    "--n": ("n", int),
}
RUN_KEYS = {"replicates": int, "seed": int, "parallelism": int, "out": str, "plot": str}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gros", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=ex.EXPERIMENTS)
    p.add_argument("--replicates", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--parallelism", type=int)
    p.add_argument("--config", help=f"key = value file or preset ({', '.join(ex.preset_names())})")
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--plot", help="SVG summary output path")
    for flag, (dest, kind) in PARAM_FLAGS.items():
        p.add_argument(flag, dest=f"param_{dest}", type=kind, metavar=dest.upper())
    return p


def make_config(args: argparse.Namespace) -> ex.ExperimentConfig:
    settings = ex.read_config_file(args.config) if args.config else {}
    named = settings.pop("experiment", args.experiment)
    if named != args.experiment:
        raise ex.ConfigError(f"experiment: config is for {named!r}, not {args.experiment!r}")
    run = {k: RUN_KEYS[k](settings.pop(k)) for k in list(settings) if k in RUN_KEYS}
    for k in RUN_KEYS:
        if getattr(args, k) is not None:
            run[k] = getattr(args, k)
    params = dict(settings)
    for dest, _ in PARAM_FLAGS.values():
        value = getattr(args, f"param_{dest}")
        if value is not None:
            params[dest] = value
    return ex.ExperimentConfig(args.experiment, params=params, **run)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = make_config(args)
        config.resolved()
    except ex.ConfigError as err:
        parser.print_usage(sys.stderr)
        print(f"gros: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        records = ex.run_experiment(config)
    except ResourceLimitError as err:
        print(f"gros: {config.experiment}: resource limit: {err}", file=sys.stderr)
        return EXIT_RESOURCE
    except MemoryError:
        print(f"gros: {config.experiment}: out of memory", file=sys.stderr)
        return EXIT_RESOURCE
    text = ex.records_to_csv(records, config.out)
    if config.out is None:
        sys.stdout.write(text)
    shown = records
    if config.experiment == "bandits":
        last = f"@{config.resolved()['horizon']}"
        shown = [r for r in records if r.metric.endswith(last)]
    rows = ex.summarize(records if config.plot else shown, config.plot)
    if config.plot and config.experiment == "bandits":
        rows = ex.summarize(shown)
    print(ex.format_summary(rows), file=sys.stderr if config.out is None else sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
