"""Command-line entry point: ``timepref run | sweep | presets``."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, ModelValidityError
from .output import run_scenarios
from .scenarios import PRESETS, load_scenarios, parse_config, serialize_config, sweep_scenarios

log = logging.getLogger("timepref")

EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_IO = 4


def _read(path: str) -> str:
    return Path(path).read_text()


def _reseed(scenarios, seed, seeds):
    out = []
    for sc in scenarios:
        if seed is not None:
            sc = replace(sc, base_seed=seed, config=replace(sc.config, seed=seed))
        if seeds is not None:
            sc = replace(sc, n_seeds=seeds)
        out.append(sc)
    return out


def cmd_run(args) -> int:
    text = _read(args.config) if args.config else None
    scenarios = load_scenarios(text, preset=args.preset)
    scenarios = _reseed(scenarios, args.seed, args.seeds)
    index = run_scenarios(scenarios, args.out, jobs=args.jobs, workers=args.workers)
    for name, agg in index.items():
        v = agg["variables"]
        print(
            f"{name}: seeds={agg['n_seeds']} "
            + " ".join(f"{var}={v[var]['mean_of_means']:.4g}(cv {v[var]['mean_cv']:.3g})" for var in v)
            + (f" floor_hits={agg['floor_hits']}" if agg["floor_hits"] else "")
        )
    print(f"results written to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    base = parse_config(_read(args.config))
    base = _reseed([base], args.seed, args.seeds)[0]
    scenarios = sweep_scenarios(base, args.vary)
    index = run_scenarios(scenarios, args.out, jobs=args.jobs, workers=args.workers)
    for name, agg in index.items():
        v = agg["variables"]
        print(f"{name}: " + " ".join(f"{var}={v[var]['mean_of_means']:.4g}" for var in v))
    print(f"results written to {args.out}")
    return 0


def cmd_presets(args) -> int:
    if args.show:
        for sc in load_scenarios(preset=args.show):
            print(f"# --- {sc.name}")
            print(serialize_config(sc), end="")
        return 0
    width = max(len(n) for n in PRESETS)
    for name, (desc, cells) in PRESETS.items():
        print(f"{name:<{width}}  {desc}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="timepref", description="Time-preference interaction simulator")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, help="base seed (replicates use seed, seed+1, ...)")
        sp.add_argument("--seeds", type=int, help="number of replicate seeds")
        sp.add_argument("--out", default="results", help="output directory (default: results)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes across seeds")
        sp.add_argument("--workers", type=int, default=1, help="threads per run (results are identical)")
        sp.add_argument("-v", "--verbose", action="store_true", help="log per-run progress")

    r = sub.add_parser("run", help="run a preset or a scenario document")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=list(PRESETS))
    src.add_argument("--config", help="path to a YAML scenario document")
    common(r)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="grid over one or more config keys")
    s.add_argument("--config", required=True, help="path to the base scenario document")
    s.add_argument("--vary", action="append", required=True, metavar="KEY=V1,V2,...",
                   help="key (e.g. eps_c or interaction.eps_c) and values; repeat for a product grid")
    common(s)
    s.set_defaults(func=cmd_sweep)

    ps = sub.add_parser("presets", help="list built-in presets")
    ps.add_argument("--show", choices=list(PRESETS), help="print the resolved documents of one preset")
    ps.set_defaults(func=cmd_presets)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ModelValidityError as exc:
        print(f"error: model left its valid region: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
