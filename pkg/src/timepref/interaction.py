"""Pairwise update of discount rates through social comparison.

Each agent rescales its discount rate by

    1 - eps_k*(beta_k*k_other - k_self)/k_self
      + eps_c*(beta_c*c_other - c_self)/c_self
      + eps_rho*(rho_norm - rho_self)/rho_self

so seeing more capital makes an agent more patient, seeing more consumption
makes it less patient, and the norm term pulls it toward ``rho_norm``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DomainError

#: floor applied to updated discount rates, per year
RHO_MIN = 1e-4

MODES = ("fixed", "mixed")


@dataclass(frozen=True)
class InteractionParams:
    """Interaction strengths and biases.

    With ``mode="mixed"`` each event uses either the capital-only set
    ``(eps_k, 0, eps_rho)`` or the consumption-only set ``(0, eps_c, eps_rho)``
    chosen by a fair coin.
    """

    eps_k: float = 0.0
    eps_c: float = 0.0
    eps_rho: float = 0.0
    beta_k: float = 1.1
    beta_c: float = 1.1
    rho_norm: float = 0.2
    mode: str = "fixed"

    def __post_init__(self):
        problems = self.violations()
        if problems:
            raise DomainError("; ".join(problems))

    def violations(self) -> list[str]:
        out = []
        for name in ("eps_k", "eps_c", "eps_rho"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                out.append(f"{name} must lie in [0, 1] (got {v})")
        for name in ("beta_k", "beta_c"):
            v = getattr(self, name)
            if not v >= 1.0:
                out.append(f"{name} must be >= 1 (got {v})")
        if not self.rho_norm > 0.0:
            out.append(f"rho_norm must be > 0 (got {self.rho_norm})")
        if self.mode not in MODES:
            out.append(f"mode must be one of {MODES} (got {self.mode!r})")
        return out

    def capital_only(self) -> "InteractionParams":
        return replace(self, eps_c=0.0, mode="fixed")

    def consumption_only(self) -> "InteractionParams":
        return replace(self, eps_k=0.0, mode="fixed")


def rate_factor(rho, k_self, k_other, c_self, c_other, params: InteractionParams) -> float:
    """Bracketed multiplier applied to ``rho`` for one side of an interaction."""
    p = params
    return (
        1.0
        - p.eps_k * (p.beta_k * k_other - k_self) / k_self
        + p.eps_c * (p.beta_c * c_other - c_self) / c_self
        + p.eps_rho * (p.rho_norm - rho) / rho
    )


def interact(rho_i, rho_j, k_i, k_j, c_i, c_j, params: InteractionParams) -> tuple[float, float]:
    """New discount rates for agents ``i`` and ``j``, both from the pre-event state.

    Results below :data:`RHO_MIN` are clamped to it; use :func:`interact_raw`
    to see the unclamped values.
    """
    raw_i, raw_j = interact_raw(rho_i, rho_j, k_i, k_j, c_i, c_j, params)
    return max(raw_i, RHO_MIN), max(raw_j, RHO_MIN)


def interact_raw(rho_i, rho_j, k_i, k_j, c_i, c_j, params: InteractionParams) -> tuple[float, float]:
    if not all(x > 0 for x in (rho_i, rho_j, k_i, k_j, c_i, c_j)):
        raise DomainError(
            f"interaction inputs must be positive (rho=({rho_i}, {rho_j}), k=({k_i}, {k_j}), c=({c_i}, {c_j}))"
        )
    new_i = rho_i * rate_factor(rho_i, k_i, k_j, c_i, c_j, params)
    new_j = rho_j * rate_factor(rho_j, k_j, k_i, c_j, c_i, params)
    return new_i, new_j
