"""Constants for the three-phase embedding and their derivation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

DERIVED = ("eps_prime", "eps", "beta", "D")


def paper_eps_prime(alpha: float, Delta: int, C: float) -> float:
    return alpha ** (Delta + 2) * C ** (-2 * Delta) * 2.0 ** (-Delta - 8) * Delta ** (-7)


@dataclass(frozen=True)
class Params:
    """Constant bundle.

    ``eps_prime``, ``eps``, ``beta`` and ``D`` follow the derivation formulas
    unless supplied in ``overrides``. ``paper_exact`` turns on the checks that
    only make sense with the derived constants (phase-1 size window, the
    reservoir bound before phase 3).

    Run knobs: ``reservoir_threshold`` is the minimum ``|B(u,v)|`` that phase 1
    must reach over all ordered pairs, ``star_threshold`` the minimum star
    audit count; ``retries`` bounds phase-1 restarts; ``budget_factor`` times
    ``n`` bounds the phase-2 search.
    """

    alpha: float
    Delta: int
    C: float = 2.0
    D: float | None = None
    overrides: dict = field(default_factory=dict)
    paper_exact: bool = False
    reservoir_threshold: int = 0
    star_threshold: int = 0
    retries: int = 50
    budget_factor: int = 50

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if self.Delta < 1:
            raise ValueError("Delta must be at least 1")
        if self.C < 2:
            raise ValueError("C must be at least 2")
        unknown = set(self.overrides) - set(DERIVED)
        if unknown:
            raise ValueError(f"unknown overrides: {sorted(unknown)}")

    @property
    def D0(self) -> float:
        return 2 * self.C * self.Delta / self.alpha

    @property
    def eps_prime(self) -> float:
        if "eps_prime" in self.overrides:
            return self.overrides["eps_prime"]
        return paper_eps_prime(self.alpha, self.Delta, self.C)

    @property
    def eps(self) -> float:
        if "eps" in self.overrides:
            return self.overrides["eps"]
        return min(self.alpha / (3 * self.Delta), self.eps_prime / (2 * self.Delta))

    @property
    def beta(self) -> float:
        if "beta" in self.overrides:
            return self.overrides["beta"]
        return self.alpha / (2 * self.Delta) ** 2

    @property
    def density(self) -> float:
        if "D" in self.overrides:
            return self.overrides["D"]
        return self.D if self.D is not None else self.D0

    def k(self, n: int) -> int:
        return math.floor(self.eps * n + 1e-9) - 1

    def leftover(self, n: int) -> int:
        """Number of vertices left for the swap phase, ``floor(2*eps'*n)``."""
        return math.floor(2 * self.eps_prime * n + 1e-9)

    def reservoir_target(self, n: int) -> float:
        return 2 * (self.Delta + 3) * self.eps_prime * n

    def with_(self, **changes) -> "Params":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {
            "alpha": self.alpha, "Delta": self.Delta, "C": self.C, "D": self.density,
            "eps_prime": self.eps_prime, "eps": self.eps, "beta": self.beta,
            "paper_exact": self.paper_exact, "reservoir_threshold": self.reservoir_threshold,
            "star_threshold": self.star_threshold, "retries": self.retries,
            "budget_factor": self.budget_factor, "overrides": dict(self.overrides),
        }
