"""Scenario documents and the built-in parameter presets.

A scenario document is YAML with optional sections; anything left out takes
the default parameterisation (1000 agents, hourly steps, daily interactions,
ten years, rho0 = ln(1/0.8) ~ 0.223, alpha = 0.5, delta = 0.1, theta = 0.5,
beta_k = beta_c = 1.1, rho_norm = 0.2)::

    name: my-run
    preset: fig2          # optional starting point
    n_seeds: 10
    base_seed: 0
    population: {n_agents: 1000, rho0: 0.223, u0: 0.0}
    schedule: {dt: 1/8760, t_p: 1/365, t_max: 10, path_clock: absolute}
    economy: {alpha: 0.5, delta: 0.1, theta: 0.5, lambda: 0, kappa: 0}
    interaction: {eps_k: 0.1, eps_c: 0, eps_rho: 0, beta_k: 1.1, beta_c: 1.1,
                  rho_norm: 0.2, mode: fixed}
    output: {sample_agents: [0, 1, 2], sample_stride: 24}

Numeric fields also accept fractions written as ``"a/b"`` strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any

import yaml

from .econ import EconomyParams
from .engine import SimConfig
from .errors import ConfigError, DomainError
from .interaction import InteractionParams


@dataclass(frozen=True)
class Scenario:
    name: str
    config: SimConfig
    n_seeds: int = 1
    base_seed: int = 0

    def seeds(self) -> list[int]:
        return [self.base_seed + r for r in range(self.n_seeds)]

    def config_for(self, seed: int) -> SimConfig:
        return replace(self.config, seed=seed)


# section -> key -> (target, kind); target is "config", "econ" or "interaction"
SCHEMA: dict[str, dict[str, tuple[str, str, str]]] = {
    "population": {
        "n_agents": ("config", "n_agents", "int"),
        "rho0": ("config", "rho0", "float"),
        "u0": ("config", "u0", "float"),
    },
    "schedule": {
        "dt": ("config", "dt", "float"),
        "t_p": ("config", "t_p", "float"),
        "t_max": ("config", "t_max", "float"),
        "path_clock": ("config", "path_clock", "str"),
    },
    "economy": {
        "alpha": ("econ", "alpha", "float"),
        "delta": ("econ", "delta", "float"),
        "theta": ("econ", "theta", "float"),
        "lambda": ("econ", "lambda_", "float"),
        "kappa": ("econ", "kappa", "float"),
    },
    "interaction": {
        "eps_k": ("interaction", "eps_k", "float"),
        "eps_c": ("interaction", "eps_c", "float"),
        "eps_rho": ("interaction", "eps_rho", "float"),
        "beta_k": ("interaction", "beta_k", "float"),
        "beta_c": ("interaction", "beta_c", "float"),
        "rho_norm": ("interaction", "rho_norm", "float"),
        "mode": ("interaction", "mode", "str"),
    },
    "output": {
        "sample_agents": ("config", "sample_agents", "ids"),
        "sample_stride": ("config", "sample_stride", "int"),
    },
}
TOP_LEVEL = {"name", "preset", "n_seeds", "base_seed", *SCHEMA}


def _grid(prefix: str, eps_name: str) -> list[tuple[str, dict]]:
    cells = []
    for eps_rho in (0.0, 0.1):
        for eps in (0.1, 0.2, 0.3):
            cells.append((f"{prefix}{eps_name}-{eps}_eps_rho-{eps_rho}", {eps_name: eps, "eps_rho": eps_rho}))
    return cells


PRESETS: dict[str, tuple[str, list[tuple[str, dict]]]] = {
    "baseline": ("no interaction; every agent stays on the initial saddle point", [("baseline", {})]),
    "fig2": ("capital comparison, eps_k = 0.1", [("fig2", {"eps_k": 0.1})]),
    "fig4": ("consumption comparison, eps_c = 0.1", [("fig4", {"eps_c": 0.1})]),
    "fig6-grid": (
        "eps_k or eps_c in {0.1, 0.2, 0.3}, each with eps_rho in {0, 0.1} (12 cells)",
        _grid("", "eps_k") + _grid("", "eps_c"),
    ),
    "fig9e": (
        "per-event coin between eps_k = 0.3 and eps_c = 0.3, eps_rho = 0",
        [("fig9e", {"eps_k": 0.3, "eps_c": 0.3, "mode": "mixed"})],
    ),
    "fig9g": (
        "per-event coin between eps_k = 0.3 and eps_c = 0.3, eps_rho = 0.1",
        [("fig9g", {"eps_k": 0.3, "eps_c": 0.3, "eps_rho": 0.1, "mode": "mixed"})],
    ),
}


def preset_scenarios(name: str, n_seeds: int = 1, base_seed: int = 0) -> list[Scenario]:
    if name not in PRESETS:
        raise ConfigError([f"unknown preset {name!r}; available: {', '.join(PRESETS)}"])
    _, cells = PRESETS[name]
    return [
        Scenario(cell, SimConfig(interaction=InteractionParams(**kw), seed=base_seed), n_seeds, base_seed)
        for cell, kw in cells
    ]


def _coerce(value: Any, kind: str, where: str, problems: list[str]):
    if kind == "str":
        if isinstance(value, str):
            return value
    elif kind == "int":
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif kind == "float":
        if isinstance(value, bool):
            pass
        elif isinstance(value, (int, float)):
            return float(value)
        elif isinstance(value, str):
            try:
                return float(Fraction(value.replace(" ", "")))
            except (ValueError, ZeroDivisionError):
                pass
    elif kind == "ids":
        if value is None:
            return None
        if isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            return tuple(value)
    problems.append(f"{where}: expected {kind}, got {value!r}")
    return None


def apply_overrides(base: Scenario, doc: dict, problems: list[str]) -> Scenario:
    """Layer the sections of ``doc`` over ``base``; collect problems instead of raising."""
    fields = {"config": {}, "econ": {}, "interaction": {}}
    for section, spec in SCHEMA.items():
        body = doc.get(section)
        if body is None:
            continue
        if not isinstance(body, dict):
            problems.append(f"{section}: expected a mapping, got {body!r}")
            continue
        for key, value in body.items():
            if key not in spec:
                problems.append(f"{section}.{key}: unknown key (allowed: {', '.join(spec)})")
                continue
            target, attr, kind = spec[key]
            coerced = _coerce(value, kind, f"{section}.{key}", problems)
            if coerced is not None or kind == "ids":
                fields[target][attr] = coerced

    cfg = base.config
    try:
        econ = replace(cfg.econ, **fields["econ"])
    except DomainError as exc:
        problems.append(f"economy: {exc}")
        econ = cfg.econ
    try:
        inter = replace(cfg.interaction, **fields["interaction"])
    except DomainError as exc:
        problems.append(f"interaction: {exc}")
        inter = cfg.interaction

    n_seeds, base_seed = base.n_seeds, base.base_seed
    if "n_seeds" in doc:
        v = doc["n_seeds"]
        if isinstance(v, int) and not isinstance(v, bool) and v >= 1:
            n_seeds = v
        else:
            problems.append(f"n_seeds: expected an integer >= 1, got {v!r}")
    if "base_seed" in doc:
        v = doc["base_seed"]
        if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < 2**64:
            base_seed = v
        else:
            problems.append(f"base_seed: expected an integer in [0, 2**64), got {v!r}")
    name = doc.get("name", base.name)
    if not isinstance(name, str) or not name:
        problems.append(f"name: expected a non-empty string, got {name!r}")
        name = base.name

    config = replace(cfg, econ=econ, interaction=inter, seed=base_seed, **fields["config"])
    return Scenario(name, config, n_seeds, base_seed)


def _load_doc(text: str | None) -> dict:
    if not text or not text.strip():
        return {}
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError([f"document is not valid YAML: {exc}"]) from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigError([f"document must be a mapping at top level, got {type(doc).__name__}"])
    unknown = sorted(set(doc) - TOP_LEVEL)
    if unknown:
        raise ConfigError([f"{k}: unknown key (allowed: {', '.join(sorted(TOP_LEVEL))})" for k in unknown])
    return doc


def load_scenarios(text: str | None = None, preset: str | None = None) -> list[Scenario]:
    """Resolve a document (and/or preset) into validated scenarios, one per preset cell."""
    doc = _load_doc(text)
    preset = preset or doc.get("preset")
    if preset is not None:
        bases = preset_scenarios(preset)
        multi = len(bases) > 1
    else:
        bases = [Scenario("custom", SimConfig())]
        multi = False

    scenarios, problems = [], []
    for base in bases:
        sc = apply_overrides(base, doc, problems)
        if multi and "name" in doc:
            sc = replace(sc, name=f"{doc['name']}-{base.name}")
        problems += [f"{sc.name}: {p}" if multi else p for p in sc.config.violations()]
        scenarios.append(sc)
    if problems:
        raise ConfigError(list(dict.fromkeys(problems)))
    return scenarios


def parse_config(text: str | None, preset: str | None = None) -> Scenario:
    """Parse a document that resolves to exactly one scenario."""
    scenarios = load_scenarios(text, preset)
    if len(scenarios) != 1:
        raise ConfigError([f"preset resolves to {len(scenarios)} scenarios; use load_scenarios"])
    return scenarios[0]


def to_document(scenario: Scenario) -> dict:
    cfg = scenario.config
    doc: dict[str, Any] = {"name": scenario.name, "n_seeds": scenario.n_seeds, "base_seed": scenario.base_seed}
    sources = {"config": cfg, "econ": cfg.econ, "interaction": cfg.interaction}
    for section, spec in SCHEMA.items():
        body = {}
        for key, (target, attr, kind) in spec.items():
            value = getattr(sources[target], attr)
            if kind == "ids":
                value = None if value is None else list(value)
            body[key] = value
        doc[section] = body
    return doc


def serialize_config(scenario: Scenario) -> str:
    return yaml.safe_dump(to_document(scenario), sort_keys=False)


def parse_vary(spec: str) -> tuple[str, str, list[str]]:
    """Split ``key=v1,v2`` into ``(section, key, values)``; bare keys are looked up by name."""
    if "=" not in spec:
        raise ConfigError([f"--vary expects key=v1,v2,... (got {spec!r})"])
    key, _, raw = spec.partition("=")
    key = key.strip()
    values = [v.strip() for v in raw.split(",") if v.strip()]
    if not values:
        raise ConfigError([f"--vary {key}: no values given"])
    if "." in key:
        section, _, leaf = key.partition(".")
        if section not in SCHEMA or leaf not in SCHEMA[section]:
            raise ConfigError([f"--vary: unknown key {key!r}"])
        return section, leaf, values
    owners = [s for s, spec_ in SCHEMA.items() if key in spec_]
    if len(owners) != 1:
        raise ConfigError([f"--vary: unknown key {key!r}"])
    return owners[0], key, values


def sweep_scenarios(base: Scenario, varies: list[str]) -> list[Scenario]:
    """Cartesian product of ``--vary`` specs layered over ``base``."""
    axes = [parse_vary(v) for v in varies]
    out, problems = [], []
    for combo in itertools.product(*[[(s, k, v) for v in vals] for s, k, vals in axes]):
        doc: dict[str, dict] = {}
        for section, key, value in combo:
            doc.setdefault(section, {})[key] = yaml.safe_load(value)
        label = "_".join(f"{key}-{value}" for _, key, value in combo)
        sc = apply_overrides(base, doc, problems)
        sc = replace(sc, name=f"{base.name}_{label}")
        problems += [f"{sc.name}: {p}" for p in sc.config.violations()]
        out.append(sc)
    if problems:
        raise ConfigError(list(dict.fromkeys(problems)))
    return out
