"""Rectangular Chebyshev collocation for the rescaled arclength system.

With ``tau = s / ell`` on [-1, 1] the profile satisfies

    R' - ell cos(Psi) = 0
    U' - ell sin(Psi) = 0
    Psi' + ell sin(Psi) / R - kappa ell U = 0

plus R(1) = b, R(-1) = sigma, Psi(1) = psi_b, Psi(-1) = -pi/2. The three
differential equations are collocated on the ``n - 1`` point grid, the
nonlinear terms being formed on the ``n`` point grid and down-sampled, so
with the four boundary rows the system is square in the ``3n + 1``
unknowns ``v = [R, U, Psi, ell]``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .chebyshev import ChebGrid, bary_eval, diff_operator
from .config import SolverConfig
from .errors import (ConvergenceError, FactorizationError, InvalidArgumentError,
                     SingularStateError)

log = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class BvpProblem:
    sigma: float
    b: float
    psi_b: float = 0.0
    kappa: float = 1.0

    def __post_init__(self):
        if not 0 < self.sigma < self.b:
            raise InvalidArgumentError(f"need 0 < sigma < b, got sigma={self.sigma}, b={self.b}")
        if not -math.pi <= self.psi_b <= math.pi:
            raise InvalidArgumentError("psi_b must lie in [-pi, pi]")
        if not self.kappa >= 0:
            raise InvalidArgumentError("kappa must be non-negative")


@dataclass
class BvpState:
    grid: ChebGrid
    R: np.ndarray
    U: np.ndarray
    Psi: np.ndarray
    ell: float

    @property
    def n(self):
        return self.grid.n

    @property
    def T(self):
        """Height at the inner boundary, tau = -1."""
        return float(self.U[0])

    def vector(self) -> np.ndarray:
        return np.concatenate([self.R, self.U, self.Psi, [self.ell]])

    @classmethod
    def from_vector(cls, grid, v):
        n = grid.n
        return cls(grid, v[:n].copy(), v[n:2 * n].copy(), v[2 * n:3 * n].copy(), v[-1])

    def resample(self, n: int) -> "BvpState":
        """Interpolate the state onto an ``n``-point grid."""
        new = ChebGrid(n)
        ev = lambda f: bary_eval(self.grid, f, new.nodes)  # noqa: E731
        return BvpState(new, ev(self.R), ev(self.U), ev(self.Psi), self.ell)


@dataclass
class NewtonReport:
    iterations: int = 0
    final_residual: float = math.inf
    n_final: int = 0
    converged: bool = False
    residual_norm: float = math.inf
    history: list = field(default_factory=list)
    damped_steps: int = 0


@lru_cache(maxsize=64)
def _operators(n):
    d0 = diff_operator(n - 1, n, 0).entries
    d1 = diff_operator(n - 1, n, 1).entries
    d0.setflags(write=False)
    d1.setflags(write=False)
    return d0, d1


def _check_state(state):
    if not np.all(np.isfinite(state.R)) or np.any(state.R <= 0):
        raise SingularStateError("radius is non-positive at a collocation node")


def residual(state: BvpState, problem: BvpProblem) -> np.ndarray:
    """Stacked collocation and boundary residuals, length ``3(n-1) + 4``."""
    _check_state(state)
    d0, d1 = _operators(state.n)
    R, U, Psi, ell = state.R, state.U, state.Psi, state.ell
    k = problem.kappa
    sin_p, cos_p = np.sin(Psi), np.cos(Psi)
    return np.concatenate([
        d1 @ R - ell * (d0 @ cos_p),
        d1 @ U - ell * (d0 @ sin_p),
        d1 @ Psi + ell * (d0 @ (sin_p / R)) - k * ell * (d0 @ U),
        [R[0] - problem.sigma,
         R[-1] - problem.b,
         Psi[0] + HALF_PI,
         Psi[-1] - problem.psi_b],
    ])


def frechet(state: BvpState, problem: BvpProblem) -> np.ndarray:
    """Dense Frechet derivative of :func:`residual`, shape ``(3n+1, 3n+1)``."""
    _check_state(state)
    n = state.n
    d0, d1 = _operators(n)
    R, U, Psi, ell = state.R, state.U, state.Psi, state.ell
    k = problem.kappa
    sin_p, cos_p = np.sin(Psi), np.cos(Psi)
    m = n - 1
    L = np.zeros((3 * m + 4, 3 * n + 1))
    rR, rU, rP = slice(0, m), slice(m, 2 * m), slice(2 * m, 3 * m)
    cR, cU, cP, cl = slice(0, n), slice(n, 2 * n), slice(2 * n, 3 * n), 3 * n

    L[rR, cR] = d1
    L[rR, cP] = ell * d0 * sin_p
    L[rR, cl] = -(d0 @ cos_p)

    L[rU, cU] = d1
    L[rU, cP] = -ell * d0 * cos_p
    L[rU, cl] = -(d0 @ sin_p)

    L[rP, cR] = d0 * (-ell * sin_p / R**2)
    L[rP, cU] = -k * ell * d0
    L[rP, cP] = d1 + d0 * (ell * cos_p / R)
    L[rP, cl] = d0 @ (sin_p / R - k * U)

    b = 3 * m
    L[b, 0] = 1.0
    L[b + 1, n - 1] = 1.0
    L[b + 2, 2 * n] = 1.0
    L[b + 3, 3 * n - 1] = 1.0
    return L


def _solve(L, rhs):
    with np.errstate(all="ignore"):
        try:
            lu, piv = scipy.linalg.lu_factor(L, check_finite=True)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise FactorizationError(str(exc)) from exc
        if np.any(np.abs(np.diag(lu)) == 0.0):
            raise FactorizationError("singular Frechet operator")
        return scipy.linalg.lu_solve((lu, piv), rhs)


def newton_solve(initial: BvpState, problem: BvpProblem, cfg: SolverConfig = SolverConfig()):
    """Newton iteration ``v <- v - L(v)^{-1} N(v)``.

    Stops once ``|dv| / |v| < cfg.tol_newton``. A halving line search is
    used only when a full step blows the residual up by more than 10x or
    leaves the admissible set R > 0.
    """
    state = initial
    _check_state(state)
    grid = state.grid
    v = state.vector()
    res = residual(state, problem)
    rnorm = np.linalg.norm(res)
    report = NewtonReport(n_final=grid.n)
    for it in range(1, cfg.max_newton + 1):
        dv = _solve(frechet(BvpState.from_vector(grid, v), problem), res)
        if not np.all(np.isfinite(dv)):
            raise FactorizationError("non-finite Newton update")
        step = 1.0
        for _ in range(21):
            trial = v - step * dv
            cand = BvpState.from_vector(grid, trial)
            try:
                new_res = residual(cand, problem)
                new_norm = np.linalg.norm(new_res)
            except SingularStateError:
                new_norm = math.inf
            if new_norm <= 10 * rnorm + 1e-300 and np.isfinite(new_norm):
                break
            step *= 0.5
        else:
            raise SingularStateError("line search could not keep the radius positive")
        if step < 1.0:
            report.damped_steps += 1
        upd = step * np.linalg.norm(dv) / np.linalg.norm(trial)
        v, res, rnorm = trial, new_res, new_norm
        report.history.append(upd)
        report.iterations = it
        report.final_residual = upd
        report.residual_norm = rnorm
        if upd < cfg.tol_newton:
            report.converged = True
            break
    return BvpState.from_vector(grid, v), report


def _grow(n, cfg):
    return max(n + 1, int(round(n * cfg.n_growth)))


def adapt_grid(state: BvpState, problem: BvpProblem, cfg: SolverConfig = SolverConfig()):
    """Solve on successively finer grids until U(-1) settles to ``cfg.tol_grid``."""
    current, rep = newton_solve(state, problem, cfg)
    total = rep.iterations
    if not rep.converged:
        raise ConvergenceError(f"Newton failed at n={current.n}", rep, current)
    while True:
        m = _grow(current.n, cfg)
        if m > cfg.n_max:
            rep.n_final = current.n
            rep.converged = False
            raise ConvergenceError(f"grid exceeded n_max={cfg.n_max}", rep, current)
        finer, rep = newton_solve(current.resample(m), problem, cfg)
        total += rep.iterations
        if not rep.converged:
            raise ConvergenceError(f"Newton failed at n={m}", rep, finer)
        delta = abs(finer.T - current.T)
        log.debug("sigma=%g b=%g n=%d -> %d, |dT|=%.3e", problem.sigma, problem.b,
                  current.n, m, delta)
        current = finer
        if delta < cfg.tol_grid:
            rep.n_final = m
            rep.iterations = total
            return current, rep


def fd_mismatch(state: BvpState, problem: BvpProblem, direction, steps=(1e-5, 1e-6, 1e-7)):
    """``|(N(v + h d) - N(v)) / h - L(v) d|`` for each step ``h``.

    Residuals are evaluated in extended precision so that cancellation in
    the difference quotient stays below the O(h) term being measured.
    """
    d = np.asarray(direction, dtype=float)
    v = state.vector()
    if d.shape != v.shape:
        raise InvalidArgumentError(f"direction has shape {d.shape}, expected {v.shape}")
    Ld = frechet(state, problem) @ d
    vl, dl = v.astype(np.longdouble), d.astype(np.longdouble)
    base = residual(BvpState.from_vector(state.grid, vl), problem)
    out = []
    for h in steps:
        hl = np.longdouble(h)
        moved = residual(BvpState.from_vector(state.grid, vl + hl * dl), problem)
        out.append(float(np.linalg.norm((moved - base) / hl - Ld)))
    return np.array(out)
