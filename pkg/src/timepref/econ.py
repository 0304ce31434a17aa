"""Closed-form Ramsey-Cass-Koopmans dynamics with Cobb-Douglas production.

Per-capita capital ``k`` and consumption ``c`` obey

    dk/dt = k**alpha - c - delta*k
    dc/dt = c * (alpha*k**(alpha-1) - delta - rho) / theta

with labour and knowledge growth fixed at zero. When an agent's discount rate
changes, capital stays put, consumption jumps onto the stable arm of the new
saddle point, and the pair relaxes along the linearised path

    k(t) = k* + exp(mu*tau) * (k_A - k*)
    c(t) = c* + exp(mu*tau) * (c_A - c*)

where ``tau`` is the time elapsed since the change and ``mu < 0`` is the stable
eigenvalue of the linearisation at the new saddle point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ModelValidityError


def _pow(x: float, p: float) -> float:
    # positive-domain power through exp/log
    return math.exp(p * math.log(x))


@dataclass(frozen=True)
class EconomyParams:
    """Production and preference constants shared by every agent."""

    alpha: float = 0.5
    delta: float = 0.1
    theta: float = 0.5
    lambda_: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise DomainError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        if not 0.0 < self.alpha < 1.0:
            out.append(f"alpha must satisfy 0 < alpha < 1 (got {self.alpha})")
        if not self.delta >= 0.0:
            out.append(f"delta must be >= 0 (got {self.delta})")
        if not self.theta > 0.0:
            out.append(f"theta must be > 0 (got {self.theta})")
        if self.lambda_ != 0.0:
            out.append(f"lambda (labour growth) must be 0 (got {self.lambda_})")
        if self.kappa != 0.0:
            out.append(f"kappa (knowledge growth) must be 0 (got {self.kappa})")
        return out


@dataclass(frozen=True)
class SteadyState:
    k_star: float
    c_star: float


@dataclass(frozen=True)
class AdjustmentPath:
    """Linearised trajectory from an anchor point toward a saddle point.

    ``t_anchor`` is the absolute time of the discount-rate change that created
    the path; evaluation uses the elapsed time ``t - t_anchor``.
    """

    k_target: float
    c_target: float
    k_anchor: float
    c_anchor: float
    mu: float
    t_anchor: float

    @classmethod
    def at_rest(cls, rho: float, params: EconomyParams, t_anchor: float = 0.0) -> "AdjustmentPath":
        """Constant path sitting on the saddle point for ``rho``."""
        ss = saddle_point(rho, params)
        mu = stable_eigenvalue(rho, ss, params)
        return cls(ss.k_star, ss.c_star, ss.k_star, ss.c_star, mu, t_anchor)


def rhs(k: float, c: float, rho: float, params: EconomyParams) -> tuple[float, float]:
    """Time derivatives ``(dk/dt, dc/dt)`` of the capital/consumption system."""
    if not (k > 0 and c > 0):
        raise DomainError(f"capital and consumption must be positive (k={k}, c={c})")
    a = params.alpha
    dk = _pow(k, a) - c - params.delta * k
    dc = c * (a * _pow(k, a - 1.0) - params.delta - rho) / params.theta
    return dk, dc


def saddle_point(rho: float, params: EconomyParams) -> SteadyState:
    if not rho > 0:
        raise DomainError(f"discount rate must be positive (rho={rho})")
    a = params.alpha
    k = _pow((params.delta + rho) / a, 1.0 / (a - 1.0))
    c = _pow(k, a) - params.delta * k
    return SteadyState(k, c)


def curvature(k_star: float, params: EconomyParams) -> float:
    """Second derivative of ``k**alpha``; negative for 0 < alpha < 1."""
    if not k_star > 0:
        raise DomainError(f"capital must be positive (k={k_star})")
    a = params.alpha
    return a * (a - 1.0) * _pow(k_star, a - 2.0)


def stable_eigenvalue(rho_new: float, target: SteadyState, params: EconomyParams) -> float:
    """Negative root of ``mu**2 - rho*mu + f''(k*)c*/theta = 0``."""
    q = curvature(target.k_star, params) * target.c_star / params.theta
    return (rho_new - math.sqrt(rho_new * rho_new - 4.0 * q)) / 2.0


def arm_slope(target: SteadyState, mu: float, params: EconomyParams) -> float:
    """Slope dc/dk of the stable arm through ``target`` (positive)."""
    return curvature(target.k_star, params) * target.c_star / (params.theta * mu)


def retarget_path(current_k: float, rho_new: float, t_now: float, params: EconomyParams) -> AdjustmentPath:
    """Jump consumption onto the stable arm of the saddle point for ``rho_new``.

    Capital is continuous, so the new path starts from ``current_k`` wherever
    the agent happens to be on its previous path.
    """
    if not current_k > 0:
        raise DomainError(f"capital must be positive (k={current_k})")
    target = saddle_point(rho_new, params)
    mu = stable_eigenvalue(rho_new, target, params)
    c_anchor = target.c_star + arm_slope(target, mu, params) * (current_k - target.k_star)
    if not c_anchor > 0:
        raise ModelValidityError(
            f"consumption jump left the positive region (c_A={c_anchor}, rho_new={rho_new}, k={current_k})"
        )
    return AdjustmentPath(target.k_star, target.c_star, current_k, c_anchor, mu, t_now)


def path_eval(path: AdjustmentPath, t: float) -> tuple[float, float]:
    tau = t - path.t_anchor
    if tau < 0:
        raise DomainError(f"path evaluated before its anchor (t={t}, t_anchor={path.t_anchor})")
    decay = math.exp(path.mu * tau)
    k = path.k_target + decay * (path.k_anchor - path.k_target)
    c = path.c_target + decay * (path.c_anchor - path.c_target)
    return k, c
