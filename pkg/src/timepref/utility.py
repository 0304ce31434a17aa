"""Discounted CRRA utility along piecewise adjustment paths.

Discounting always uses absolute time, ``exp(-rho*t)``, with ``rho`` the rate in
force at ``t``; a change of rate does not reset the clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .econ import AdjustmentPath, path_eval
from .errors import DomainError

#: relative gap |c - c*| / c* below which the tail switches to its closed form
TAIL_SWITCH_TOL = 1e-9


def instantaneous_utility(c, theta: float):
    """CRRA utility ``c**(1-theta)/(1-theta)``, ``log(c)`` at ``theta == 1``.

    Works elementwise on arrays.
    """
    if np.any(np.asarray(c) <= 0):
        raise DomainError("consumption must be positive")
    if theta == 1.0:
        return np.log(c) if isinstance(c, np.ndarray) else math.log(c)
    g = 1.0 - theta
    if isinstance(c, np.ndarray):
        return np.exp(g * np.log(c)) / g
    return math.exp(g * math.log(c)) / g


def discounted_integrand(c, rho, t, theta: float):
    """``exp(-rho*t) * u(c)`` for scalars or broadcastable arrays."""
    if isinstance(c, np.ndarray) or isinstance(rho, np.ndarray) or isinstance(t, np.ndarray):
        return np.exp(-np.multiply(rho, t)) * instantaneous_utility(np.asarray(c, dtype=float), theta)
    return math.exp(-rho * t) * instantaneous_utility(c, theta)


def rho_from_phi(phi: float) -> float:
    """Exponential discount rate equivalent to a per-year discount factor."""
    if not 0.0 < phi < 1.0:
        raise DomainError(f"discount factor must lie in (0, 1) (phi={phi})")
    return math.log(1.0 / phi)


@dataclass(frozen=True)
class UtilityAccumulator:
    total: float = 0.0
    t_last: float = 0.0


def accumulate(
    acc: UtilityAccumulator,
    rho: float,
    c_ends: tuple[float, float],
    t_from: float,
    t_to: float,
    theta: float,
) -> UtilityAccumulator:
    """Add the trapezoid estimate of the discounted utility over ``[t_from, t_to]``.

    ``c_ends`` is consumption at the two ends of the segment.
    """
    if t_from != acc.t_last:
        raise ValueError(f"segment must start at the accumulator time (t_from={t_from}, t_last={acc.t_last})")
    if t_to < t_from:
        raise ValueError(f"time cannot go backwards (t_from={t_from}, t_to={t_to})")
    if t_to == t_from:
        return acc
    f0 = discounted_integrand(c_ends[0], rho, t_from, theta)
    f1 = discounted_integrand(c_ends[1], rho, t_to, theta)
    return UtilityAccumulator(acc.total + 0.5 * (t_to - t_from) * (f0 + f1), t_to)


def switch_time(path: AdjustmentPath, t_from: float) -> float:
    """First time at or after ``t_from`` where the path is within tolerance of its target."""
    gap = abs(path.c_anchor - path.c_target)
    if gap <= TAIL_SWITCH_TOL * path.c_target:
        return t_from
    tau = math.log(TAIL_SWITCH_TOL * path.c_target / gap) / path.mu
    return max(t_from, path.t_anchor + tau)


def tail_utility(path: AdjustmentPath, rho: float, t_max: float, theta: float, dt: float | None = None) -> float:
    """Discounted utility from ``t_max`` to infinity with ``rho`` frozen.

    Consumption keeps following ``path`` until it is within ``TAIL_SWITCH_TOL``
    of the target, after which the constant-consumption remainder
    ``exp(-rho*T) u(c*) / rho`` is added in closed form. With ``dt`` the
    adjusting stretch is integrated by the trapezoid rule at that step;
    otherwise by adaptive quadrature.
    """
    if not rho > 0:
        raise DomainError(f"discount rate must be positive (rho={rho})")
    t_switch = switch_time(path, t_max)
    remainder = math.exp(-rho * t_switch) * instantaneous_utility(path.c_target, theta) / rho
    if t_switch == t_max:
        return remainder

    def f(t):
        return discounted_integrand(path_eval(path, t)[1], rho, t, theta)

    if dt is None:
        body, _ = integrate.quad(f, t_max, t_switch, epsabs=0.0, epsrel=1e-12, limit=200)
    else:
        n = max(1, math.ceil((t_switch - t_max) / dt))
        ts = np.linspace(t_max, t_switch, n + 1)
        cs = path.c_target + np.exp(path.mu * (ts - path.t_anchor)) * (path.c_anchor - path.c_target)
        body = float(np.trapezoid(discounted_integrand(cs, rho, ts, theta), ts))
    return body + remainder


def tail_utilities(
    rho: np.ndarray,
    c_target: np.ndarray,
    c_anchor: np.ndarray,
    mu: np.ndarray,
    t_anchor: np.ndarray,
    t_max: float,
    theta: float,
) -> np.ndarray:
    """Vectorised :func:`tail_utility` (adaptive quadrature) over a population."""
    gap = np.abs(c_anchor - c_target)
    moving = gap > TAIL_SWITCH_TOL * c_target
    t_switch = np.full(rho.shape, float(t_max))
    with np.errstate(divide="ignore"):
        tau = np.log(TAIL_SWITCH_TOL * c_target[moving] / gap[moving]) / mu[moving]
    t_switch[moving] = np.maximum(t_max, t_anchor[moving] + tau)
    out = np.exp(-rho * t_switch) * instantaneous_utility(c_target, theta) / rho

    idx = np.flatnonzero(t_switch > t_max)
    if idx.size:
        span = t_switch[idx] - t_max
        r, ct, ca, m, ta = rho[idx], c_target[idx], c_anchor[idx], mu[idx], t_anchor[idx]

        def f(s):
            # s in [0, 1] maps onto each agent's own [t_max, t_switch]
            t = t_max + s * span
            c = ct + np.exp(m * (t - ta)) * (ca - ct)
            return span * discounted_integrand(c, r, t, theta)

        body, _ = integrate.quad_vec(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-12)
        out[idx] += body
    return out
