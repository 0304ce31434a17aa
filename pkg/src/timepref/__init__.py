"""Agent-based simulator of time-preference interactions on Ramsey-Cass-Koopmans dynamics."""

from .econ import (
    AdjustmentPath,
    EconomyParams,
    SteadyState,
    curvature,
    path_eval,
    retarget_path,
    rhs,
    saddle_point,
    stable_eigenvalue,
)
from .engine import AgentState, EventRecord, Population, RunResult, SimConfig, init, run, step
from .errors import ConfigError, DomainError, ModelValidityError
from .interaction import RHO_MIN, InteractionParams, interact
from .metrics import SummaryStats, gini, summary
from .scenarios import Scenario, load_scenarios, parse_config, serialize_config
from .utility import UtilityAccumulator, accumulate, instantaneous_utility, rho_from_phi, tail_utility

__version__ = "0.1.0"
