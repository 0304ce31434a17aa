"""Exception types raised by the simulator."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class ModelValidityError(RuntimeError):
    """The dynamics left the economically meaningful region.

    Carries the offending agent and step when raised from the engine.
    """

    def __init__(self, message: str, agent: int | None = None, step: int | None = None):
        self.agent = agent
        self.step = step
        where = []
        if agent is not None:
            where.append(f"agent={agent}")
        if step is not None:
            where.append(f"step={step}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ConfigError(ValueError):
    """A configuration violates one or more constraints.

    ``violations`` holds one human-readable line per violated constraint.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.violations))
