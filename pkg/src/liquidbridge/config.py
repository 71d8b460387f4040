"""Solver and asymptotic-extension settings."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances, grid sizes and truncation parameters.

    ``tol_newton`` and the grid schedule (``n_init``, ``n_growth``,
    ``n_max``, ``tol_grid``) are engineering choices; everything else
    follows the published procedure.
    """

    tol_abs: float = 1e-11
    tol_newton: float = 1e-13
    tol_grid: float = 1e-12
    n_init: int = 60
    n_growth: float = 1.5
    n_max: int = 2000
    max_newton: int = 100
    b_init_floor: float = 14.0
    b_step: float = 2.0
    b_max: float = 200.0
    kappa: float = 1.0
    ode_tol: float = 1e-11
    ode_method: str = "RK45"
    n_dense: int = 200

    def __post_init__(self):
        for name in ("tol_abs", "tol_newton", "tol_grid", "b_step", "kappa", "ode_tol"):
            if not getattr(self, name) > 0:
                raise InvalidArgumentError(f"{name} must be positive")
        if self.n_init < 4 or self.n_max < self.n_init:
            raise InvalidArgumentError("need 4 <= n_init <= n_max")
        if not self.n_growth > 1:
            raise InvalidArgumentError("n_growth must exceed 1")

    def replace(self, **changes) -> "SolverConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class AsymptoticConfig:
    sigma_lo: float = 0.00085
    sigma_hi_asym: float = 0.170
    n_points: int = 100
    n_keep: int = 10
    splice_hi: float = 0.085

    def __post_init__(self):
        if not 0 < self.sigma_lo < self.splice_hi <= self.sigma_hi_asym:
            raise InvalidArgumentError("need 0 < sigma_lo < splice_hi <= sigma_hi_asym")
        if self.n_points < 2 or not 0 <= self.n_keep <= self.n_points:
            raise InvalidArgumentError("need n_points >= 2 and 0 <= n_keep <= n_points")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
