"""Run scenarios and write per-run and across-seed result files.

Layout under an output directory::

    <out>/<scenario>/seed_<n>/agents.csv
                              events.csv
                              timeseries.csv
                              histogram_{rho,k,c,U}.csv
                              summary.json
    <out>/<scenario>/aggregate.json
    <out>/index.json                      # one entry per scenario

Floats in CSV files carry 17 significant digits so a run can be reloaded
without loss.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .engine import RunResult, SimConfig, run
from .metrics import summary
from .scenarios import Scenario, to_document

log = logging.getLogger(__name__)

AGENT_COLUMNS = ("agent_id", "rho_final", "k_final", "c_final", "utility", "n_interactions")
EVENT_COLUMNS = ("step", "t", "i", "j", "rho_i_old", "rho_i_new", "rho_j_old", "rho_j_new", "mode")
TIMESERIES_COLUMNS = ("step", "t", "agent_id", "rho", "k", "c", "utility")
HISTOGRAM_COLUMNS = ("bin_left", "bin_right", "count")
VARIABLES = ("rho", "k", "c", "U")
AGGREGATE_LABELS = (
    ("mean", "mean_of_means"),
    ("cv", "mean_cv"),
    ("gini", "mean_gini"),
    ("skewness", "mean_skewness"),
    ("kurtosis", "mean_kurtosis"),
)


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def run_summary(result: RunResult, scenario_name: str) -> dict:
    cfg = result.config
    return {
        "scenario": scenario_name,
        "seed": result.seed,
        # loadable as a scenario document that reproduces this exact run
        "config": to_document(Scenario(scenario_name, cfg, 1, cfg.seed)),
        "n_events": len(result.events),
        "n_agent_changes": 2 * len(result.events),
        "floor_hits": result.floor_hits,
        "stats": {name: summary(values).as_dict() for name, values in result.variables().items()},
    }


def write_run(result: RunResult, directory: Path, scenario_name: str) -> dict:
    directory.mkdir(parents=True, exist_ok=True)
    n = result.config.n_agents
    _write_csv(
        directory / "agents.csv",
        AGENT_COLUMNS,
        zip(range(n), result.rho, result.k, result.c, result.utility, result.n_interactions),
    )
    _write_csv(
        directory / "events.csv",
        EVENT_COLUMNS,
        ((e.step, e.t, e.i, e.j, e.rho_i_old, e.rho_i_new, e.rho_j_old, e.rho_j_new, e.mode) for e in result.events),
    )
    _write_csv(directory / "timeseries.csv", TIMESERIES_COLUMNS, result.timeseries)
    for name, values in result.variables().items():
        h = summary(values).histogram
        _write_csv(
            directory / f"histogram_{name}.csv",
            HISTOGRAM_COLUMNS,
            zip(h.edges[:-1], h.edges[1:], h.counts),
        )
    info = run_summary(result, scenario_name)
    with open(directory / "summary.json", "w") as fh:
        json.dump(info, fh, indent=2)
        fh.write("\n")
    return info


def _mean_se(xs: list[float | None]) -> tuple[float | None, float | None]:
    vals = [x for x in xs if x is not None]
    if not vals:
        return None, None
    mean = float(np.mean(vals))
    if len(vals) < 2:
        return mean, None
    return mean, float(np.std(vals, ddof=1) / math.sqrt(len(vals)))


def aggregate(summaries: list[dict], scenario: Scenario) -> dict:
    """Across-seed means and standard errors of per-run statistics."""
    out = {
        "scenario": scenario.name,
        "n_seeds": len(summaries),
        "seeds": [s["seed"] for s in summaries],
        "config": to_document(scenario),
        "floor_hits": sum(s["floor_hits"] for s in summaries),
        "variables": {},
    }
    for var in VARIABLES:
        entry = {}
        for stat, label in AGGREGATE_LABELS:
            m, se = _mean_se([s["stats"][var][stat] for s in summaries])
            entry[label] = m
            entry[f"se_{stat}"] = se
        out["variables"][var] = entry
    return out


def _run_one(args: tuple[SimConfig, str, str | None, int]) -> dict:
    config, scenario_name, directory, workers = args
    result = run(config, workers=workers)
    if directory is None:
        return run_summary(result, scenario_name)
    return write_run(result, Path(directory), scenario_name)


def run_scenario(
    scenario: Scenario,
    output_dir: str | Path | None,
    jobs: int = 1,
    workers: int = 1,
) -> dict:
    """Run every seed of ``scenario``; returns the aggregate (also written to disk)."""
    base = None if output_dir is None else Path(output_dir) / scenario.name
    tasks = [
        (scenario.config_for(seed), scenario.name, None if base is None else str(base / f"seed_{seed}"), workers)
        for seed in scenario.seeds()
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            summaries = list(pool.map(_run_one, tasks))
    else:
        summaries = [_run_one(t) for t in tasks]
    for s in summaries:
        log.info("%s seed %d: %d events, %d floor hits", s["scenario"], s["seed"], s["n_events"], s["floor_hits"])
    agg = aggregate(summaries, scenario)
    if base is not None:
        base.mkdir(parents=True, exist_ok=True)
        with open(base / "aggregate.json", "w") as fh:
            json.dump(agg, fh, indent=2)
            fh.write("\n")
    return agg


def run_scenarios(scenarios: list[Scenario], output_dir: str | Path, jobs: int = 1, workers: int = 1) -> dict:
    index = {sc.name: run_scenario(sc, output_dir, jobs=jobs, workers=workers) for sc in scenarios}
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "index.json", "w") as fh:
        json.dump(index, fh, indent=2)
        fh.write("\n")
    return index
