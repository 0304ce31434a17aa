"""Agent-based simulation loop coupling discount-rate interactions to RCK dynamics.

Every agent starts on the saddle point of ``rho0``. Time advances in steps of
``dt``; whenever the step index is a multiple of ``t_p/dt`` one uniformly
random pair interacts, both partners get new discount rates, and both jump
onto the stable arms of their new saddle points. Between events each agent
follows its linearised adjustment path, and discounted utility accumulates by
the trapezoid rule. After the last step the utility tail to infinity is added
with the discount rate frozen.

``path_clock`` picks the time origin of each new path. Under ``"absolute"``
(the default) the path decays as ``exp(mu*t)`` with ``t`` counted from the
start of the run, so capital jumps to ``k* + exp(mu*t)(k - k*)`` at an event.
Under ``"event"`` it decays as ``exp(mu*(t - t_event))`` and capital is
continuous.

Randomness comes from a PCG64 stream consumed only at events, in the order:
``i`` uniform on ``[0, N)``, ``j`` uniform on ``[0, N-1)`` shifted past ``i``,
then (mixed mode only) one coin. A raw 64-bit word ``w`` maps to
``(w * n) >> 64`` for an index below ``n`` and ``w >> 63`` for the coin.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .econ import AdjustmentPath, EconomyParams, path_eval, retarget_path, saddle_point, stable_eigenvalue
from .errors import ConfigError, DomainError, ModelValidityError
from .interaction import RHO_MIN, InteractionParams, interact_raw
from .utility import UtilityAccumulator, tail_utilities

log = logging.getLogger(__name__)

DEFAULT_SAMPLE_AGENTS = 10

#: ln(1/0.8), the rate equivalent to a per-year discount factor of 0.8
DEFAULT_RHO0 = math.log(1.0 / 0.8)

#: "absolute": adjustment paths decay as exp(mu*t) with t measured from the
#: start of the run; "event": as exp(mu*(t - t_event)), keeping capital continuous.
PATH_CLOCKS = ("absolute", "event")


@dataclass(frozen=True)
class SimConfig:
    n_agents: int = 1000
    dt: float = 1.0 / 8760.0
    t_p: float = 1.0 / 365.0
    t_max: float = 10.0
    rho0: float = DEFAULT_RHO0
    u0: float = 0.0
    econ: EconomyParams = field(default_factory=EconomyParams)
    interaction: InteractionParams = field(default_factory=InteractionParams)
    seed: int = 0
    sample_agents: tuple[int, ...] | None = None
    sample_stride: int = 24
    path_clock: str = "absolute"

    def violations(self) -> list[str]:
        out = []
        if not (isinstance(self.n_agents, int) and self.n_agents >= 2):
            out.append(f"n_agents must be an integer >= 2 (got {self.n_agents})")
        if not self.dt > 0:
            out.append(f"dt must be > 0 (got {self.dt})")
        if not self.t_p > 0:
            out.append(f"t_p must be > 0 (got {self.t_p})")
        elif self.dt > 0 and _as_count(self.t_p / self.dt) is None:
            out.append(f"t_p must be an integer multiple of dt (t_p/dt = {self.t_p / self.dt})")
        if not self.t_max > 0:
            out.append(f"t_max must be > 0 (got {self.t_max})")
        if not self.rho0 > 0:
            out.append(f"rho0 must be > 0 (got {self.rho0})")
        if not math.isfinite(self.u0):
            out.append(f"u0 must be finite (got {self.u0})")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            out.append(f"seed must be an integer in [0, 2**64) (got {self.seed})")
        if not (isinstance(self.sample_stride, int) and self.sample_stride >= 1):
            out.append(f"sample_stride must be an integer >= 1 (got {self.sample_stride})")
        if self.sample_agents is not None and isinstance(self.n_agents, int):
            bad = [a for a in self.sample_agents if not 0 <= a < self.n_agents]
            if bad:
                out.append(f"sample_agents must be ids in [0, n_agents) (bad: {bad})")
        if self.path_clock not in PATH_CLOCKS:
            out.append(f"path_clock must be one of {PATH_CLOCKS} (got {self.path_clock!r})")
        out += self.econ.violations() + self.interaction.violations()
        return out

    def validate(self) -> "SimConfig":
        problems = self.violations()
        if problems:
            raise ConfigError(problems)
        return self

    @property
    def steps_per_period(self) -> int:
        return _as_count(self.t_p / self.dt)

    @property
    def n_steps(self) -> int:
        ratio = self.t_max / self.dt
        near = round(ratio)
        return near if abs(ratio - near) <= 1e-9 * max(1.0, ratio) else math.ceil(ratio)

    @property
    def n_events(self) -> int:
        return self.n_steps // self.steps_per_period

    @property
    def sampled(self) -> tuple[int, ...]:
        if self.sample_agents is None:
            return tuple(range(min(DEFAULT_SAMPLE_AGENTS, self.n_agents)))
        return tuple(self.sample_agents)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sample_agents"] = list(self.sampled)
        return d


def _as_count(ratio: float) -> int | None:
    near = round(ratio)
    if near >= 1 and abs(ratio - near) <= 1e-9 * ratio:
        return int(near)
    return None


@dataclass(frozen=True)
class AgentState:
    id: int
    rho: float
    path: AdjustmentPath
    utility: UtilityAccumulator
    n_interactions: int


@dataclass(frozen=True)
class EventRecord:
    step: int
    t: float
    i: int
    j: int
    rho_i_old: float
    rho_i_new: float
    rho_j_old: float
    rho_j_new: float
    mode: str


FIELDS = ("rho", "k_target", "c_target", "k_anchor", "c_anchor", "mu", "t_anchor")


class Population:
    """Mutable per-agent state held as parallel arrays.

    Path parameters live in ``k_target``, ``c_target``, ``k_anchor``,
    ``c_anchor``, ``mu`` and ``t_anchor``; ``f_last`` caches each agent's
    discounted-utility integrand at the current step for the next trapezoid.
    """

    def __init__(self, config: SimConfig):
        self.config = config
        n = config.n_agents
        econ = config.econ
        start = AdjustmentPath.at_rest(config.rho0, econ)
        self.rho = np.full(n, float(config.rho0))
        self.k_target = np.full(n, start.k_target)
        self.c_target = np.full(n, start.c_target)
        self.k_anchor = np.full(n, start.k_anchor)
        self.c_anchor = np.full(n, start.c_anchor)
        self.mu = np.full(n, start.mu)
        self.t_anchor = np.zeros(n)
        self.utility = np.full(n, float(config.u0))
        self.n_interactions = np.zeros(n, dtype=np.int64)
        self.step_index = 0
        self.bitgen = np.random.PCG64(config.seed)
        self.events: list[EventRecord] = []
        self.floor_hits = 0
        self.timeseries: list[tuple] = []
        self.f_last = self._integrand(slice(None), np.array([0.0]))[:, 0]
        self._record_samples([0], None)

    @property
    def t(self) -> float:
        return self.step_index * self.config.dt

    def path(self, i: int) -> AdjustmentPath:
        return AdjustmentPath(
            float(self.k_target[i]),
            float(self.c_target[i]),
            float(self.k_anchor[i]),
            float(self.c_anchor[i]),
            float(self.mu[i]),
            float(self.t_anchor[i]),
        )

    def agent(self, i: int) -> AgentState:
        return AgentState(
            i,
            float(self.rho[i]),
            self.path(i),
            UtilityAccumulator(float(self.utility[i]), self.t),
            int(self.n_interactions[i]),
        )

    def state_at(self, t: float, rows=slice(None)) -> tuple[np.ndarray, np.ndarray]:
        """Capital and consumption of the selected agents at time ``t``."""
        decay = np.exp(self.mu[rows] * (t - self.t_anchor[rows]))
        k = self.k_target[rows] + decay * (self.k_anchor[rows] - self.k_target[rows])
        c = self.c_target[rows] + decay * (self.c_anchor[rows] - self.c_target[rows])
        return k, c

    def _integrand(self, rows, t: np.ndarray) -> np.ndarray:
        """Discounted utility integrand for ``rows`` (axis 0) at times ``t`` (axis 1)."""
        theta = self.config.econ.theta
        ct = self.c_target[rows][:, None]
        decay = np.exp(self.mu[rows][:, None] * (t[None, :] - self.t_anchor[rows][:, None]))
        c = ct + decay * (self.c_anchor[rows][:, None] - ct)
        if theta == 1.0:
            u = np.log(c)
        else:
            g = 1.0 - theta
            u = np.exp(g * np.log(c)) / g
        return np.exp(-self.rho[rows][:, None] * t[None, :]) * u

    def _draw_index(self, n: int) -> int:
        return (int(self.bitgen.random_raw()) * n) >> 64

    def _event(self, step: int) -> tuple[int, int]:
        cfg = self.config
        n = cfg.n_agents
        t = step * cfg.dt
        i = self._draw_index(n)
        j = self._draw_index(n - 1)
        if j >= i:
            j += 1
        params = cfg.interaction
        mode = "fixed"
        if params.mode == "mixed":
            if int(self.bitgen.random_raw()) >> 63:
                params, mode = params.consumption_only(), "consumption"
            else:
                params, mode = params.capital_only(), "capital"

        k_i, c_i = path_eval(self.path(i), t)
        k_j, c_j = path_eval(self.path(j), t)
        rho_i, rho_j = float(self.rho[i]), float(self.rho[j])
        new_i, new_j = interact_raw(rho_i, rho_j, k_i, k_j, c_i, c_j, params)
        for who, value in ((i, new_i), (j, new_j)):
            if value < RHO_MIN:
                self.floor_hits += 1
                log.warning("discount rate of agent %d clamped from %g to %g at step %d", who, value, RHO_MIN, step)
        new_i, new_j = max(new_i, RHO_MIN), max(new_j, RHO_MIN)

        origin = t if cfg.path_clock == "event" else 0.0
        for who, k_now, rho_new in ((i, k_i, new_i), (j, k_j, new_j)):
            try:
                p = retarget_path(k_now, rho_new, origin, cfg.econ)
            except (ModelValidityError, DomainError) as exc:
                raise ModelValidityError(str(exc), agent=who, step=step) from exc
            self.rho[who] = rho_new
            self.k_target[who] = p.k_target
            self.c_target[who] = p.c_target
            self.k_anchor[who] = p.k_anchor
            self.c_anchor[who] = p.c_anchor
            self.mu[who] = p.mu
            self.t_anchor[who] = p.t_anchor
            self.n_interactions[who] += 1
        self.events.append(EventRecord(step, t, i, j, rho_i, new_i, rho_j, new_j, mode))
        return i, j

    def _record_samples(self, steps, cumulative: np.ndarray | None, first_col: int = 0) -> None:
        ids = np.asarray(self.config.sampled, dtype=np.int64)
        if ids.size == 0:
            return
        for s in steps:
            t = s * self.config.dt
            k, c = self.state_at(t, ids)
            if cumulative is None:
                u = self.utility[ids]
            else:
                u = cumulative[ids, s - first_col]
            for a, rho_a, k_a, c_a, u_a in zip(ids, self.rho[ids], k, c, u):
                self.timeseries.append((s, t, int(a), float(rho_a), float(k_a), float(c_a), float(u_a)))

    def advance(self, step_end: int, pool: ThreadPoolExecutor | None = None, n_blocks: int = 1) -> None:
        """Advance to ``step_end``; at most the final step may carry an event."""
        cfg = self.config
        s0 = self.step_index
        period = cfg.steps_per_period
        if step_end <= s0:
            raise ValueError(f"step_end must exceed the current step {s0} (got {step_end})")
        if (step_end - 1) // period != s0 // period:
            raise ValueError(f"an interaction falls strictly inside steps ({s0}, {step_end}]")
        steps = np.arange(s0 + 1, step_end + 1)
        times = steps * cfg.dt
        n = cfg.n_agents

        if pool is None or n_blocks <= 1:
            block = self._integrand(slice(None), times)
        else:
            bounds = np.linspace(0, n, n_blocks + 1).astype(int)
            parts = pool.map(lambda b: self._integrand(slice(b[0], b[1]), times), zip(bounds[:-1], bounds[1:]))
            block = np.concatenate(list(parts), axis=0)

        stride = cfg.sample_stride
        sample_steps = [int(s) for s in steps if s % stride == 0]
        pre_samples = [s for s in sample_steps if s != step_end]

        # interior samples see the pre-event paths
        pending = []
        if pre_samples and cfg.sampled:
            ids = np.asarray(cfg.sampled, dtype=np.int64)
            for s in pre_samples:
                k, c = self.state_at(s * cfg.dt, ids)
                pending.append((s, ids, self.rho[ids].copy(), k, c))

        if step_end % period == 0:
            i, j = self._event(step_end)
            pair = np.array([i, j])
            block[pair, -1] = self._integrand(pair, times[-1:])[:, 0]

        # trapezoid over each step, summed left to right
        left = np.concatenate([self.f_last[:, None], block[:, :-1]], axis=1)
        cumulative = np.cumsum(np.concatenate([self.utility[:, None], 0.5 * cfg.dt * (left + block)], axis=1), axis=1)

        for s, ids, rho_s, k, c in pending:
            u = cumulative[ids, s - s0]
            for a, r_a, k_a, c_a, u_a in zip(ids, rho_s, k, c, u):
                self.timeseries.append((s, s * cfg.dt, int(a), float(r_a), float(k_a), float(c_a), float(u_a)))

        self.utility = cumulative[:, -1].copy()
        self.f_last = block[:, -1].copy()
        self.step_index = step_end
        if step_end % stride == 0:
            self._record_samples([step_end], cumulative, first_col=s0)


@dataclass
class RunResult:
    config: SimConfig
    seed: int
    rho: np.ndarray
    k: np.ndarray
    c: np.ndarray
    utility: np.ndarray
    n_interactions: np.ndarray
    events: list[EventRecord]
    timeseries: list[tuple]
    floor_hits: int
    utility_horizon: np.ndarray | None = None

    def variables(self) -> dict[str, np.ndarray]:
        return {"rho": self.rho, "k": self.k, "c": self.c, "U": self.utility}


def init(config: SimConfig) -> Population:
    config.validate()
    return Population(config)


def step(population: Population, step_index: int) -> Population:
    """Advance ``population`` by the single step ``step_index`` (its current step + 1)."""
    if step_index != population.step_index + 1:
        raise ValueError(f"expected step {population.step_index + 1}, got {step_index}")
    population.advance(step_index)
    return population


def finish(population: Population) -> RunResult:
    """Add the infinite-horizon tail and package the final state."""
    cfg = population.config
    t_end = population.t
    k, c = population.state_at(t_end)
    horizon = population.utility.copy()
    tail = tail_utilities(
        population.rho, population.c_target, population.c_anchor, population.mu, population.t_anchor,
        t_end, cfg.econ.theta,
    )
    return RunResult(
        config=cfg,
        seed=cfg.seed,
        rho=population.rho.copy(),
        k=k,
        c=c,
        utility=horizon + tail,
        n_interactions=population.n_interactions.copy(),
        events=list(population.events),
        timeseries=list(population.timeseries),
        floor_hits=population.floor_hits,
        utility_horizon=horizon,
    )


def run(config: SimConfig, workers: int = 1) -> RunResult:
    """Execute a full run.

    ``workers > 1`` evaluates agent blocks on a thread pool; results are
    bit-identical to the serial path because every per-agent operation is
    elementwise and all random draws happen on the serial event path.
    """
    pop = init(config)
    n_steps = config.n_steps
    period = config.steps_per_period
    boundaries = list(range(period, n_steps + 1, period))
    if not boundaries or boundaries[-1] != n_steps:
        boundaries.append(n_steps)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for b in boundaries:
                pop.advance(b, pool=pool, n_blocks=workers)
    else:
        for b in boundaries:
            pop.advance(b)
    return finish(pop)
