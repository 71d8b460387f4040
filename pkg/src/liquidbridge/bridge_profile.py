"""Height of the vertical point, T(sigma), by truncated-domain collocation.

The unbounded lower portion of the bridge is replaced by a two-point
problem on [sigma, b] with a horizontal tangent at r = b. The outer radius
starts at ``max(b_init_floor, sigma + 4)`` and grows by ``b_step`` until
consecutive heights agree to ``tol_abs``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .chebyshev import ChebGrid, cheb_points
from .config import SolverConfig
from .errors import (BridgeError, ConvergenceError, InvalidArgumentError,
                     SingularStateError, TruncationError)
from .spectral_bvp import BvpProblem, BvpState, NewtonReport, adapt_grid
from .tables import TSample, TTable

log = logging.getLogger(__name__)


@dataclass
class ProfileSolution:
    sigma: float
    T: float
    state: BvpState
    b_final: float
    report: NewtonReport
    b_history: list = field(default_factory=list)  # (b, T, n) per truncation radius

    @property
    def ell(self):
        return self.state.ell

    @property
    def previous_T(self):
        """Height at the truncation radius preceding ``b_final``."""
        return self.b_history[-2][1]


def initial_guess(sigma: float, b: float, grid: ChebGrid) -> BvpState:
    """Linear radius, exponentially decaying height, matching inclination."""
    if not 0 < sigma < b:
        raise InvalidArgumentError("need 0 < sigma < b")
    tau = grid.nodes
    R = (1 + tau) * b / 2 + (1 - tau) * sigma / 2
    U = np.exp(-R + sigma)
    Psi = np.arctan(-np.exp(-R + sigma))
    return BvpState(grid, R, U, Psi, b - sigma)


def rescale_state(state: BvpState, sigma: float, b_old: float, b_new: float) -> BvpState:
    """Warm start for a larger truncation radius.

    Radii beyond ``max(1, sigma)`` are stretched affinely so the outer
    boundary lands on ``b_new``; heights and angles stay attached to their
    nodes.
    """
    pin = max(1.0, sigma)
    R = state.R.copy()
    far = R > pin
    R[far] = pin + (R[far] - pin) * (b_new - pin) / (b_old - pin)
    R[-1] = b_new
    ell = state.ell * (b_new - sigma) / (b_old - sigma)
    return BvpState(state.grid, R, state.U.copy(), state.Psi.copy(), ell)


def solve_at(sigma, b, cfg: SolverConfig = SolverConfig(), psi_b=0.0, start=None):
    """One truncated solve with grid adaptation; returns ``(state, report)``."""
    problem = BvpProblem(sigma, b, psi_b, cfg.kappa)
    if start is None:
        start = initial_guess(sigma, b, ChebGrid(cfg.n_init))
    return adapt_grid(start, problem, cfg)


def solve_T(sigma: float, cfg: SolverConfig = SolverConfig()) -> ProfileSolution:
    if not sigma > 0:
        raise InvalidArgumentError("sigma must be positive")
    b = max(cfg.b_init_floor, sigma + 4.0)
    state, rep = solve_at(sigma, b, cfg)
    history = [(b, state.T, rep.n_final)]
    while True:
        b_new = b + cfg.b_step
        if b_new > cfg.b_max:
            raise TruncationError(f"T({sigma}) not stable before b_max={cfg.b_max}")
        start = rescale_state(state, sigma, b, b_new)
        new_state, rep = solve_at(sigma, b_new, cfg, start=start)
        history.append((b_new, new_state.T, rep.n_final))
        done = abs(new_state.T - state.T) < cfg.tol_abs
        state, b = new_state, b_new
        if done:
            break
    log.info("T(%g) = %.15g at b=%g, n=%d", sigma, state.T, b, rep.n_final)
    return ProfileSolution(sigma, state.T, state, b, rep, history)


def sweep_T(sigmas, cfg: SolverConfig = SolverConfig(), workers: int = 1) -> TTable:
    """Solve every sigma independently; failures are recorded per row."""
    sigmas = np.asarray(sigmas, dtype=float)
    if sigmas.ndim != 1 or sigmas.size == 0:
        raise InvalidArgumentError("need a non-empty 1-d array of radii")
    if np.any(sigmas <= 0) or np.any(np.diff(sigmas) <= 0):
        raise InvalidArgumentError("radii must be positive and strictly increasing")
    if workers > 1 and sigmas.size > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, sigmas, [cfg] * sigmas.size))
    else:
        rows = [_sweep_row(s, cfg) for s in sigmas]
    return TTable(rows)


def _sweep_row(sigma, cfg):
    try:
        sol = solve_T(float(sigma), cfg)
    except BridgeError as exc:
        return TSample(float(sigma), math.nan, error=f"{type(exc).__name__}: {exc}")
    return TSample(sol.sigma, sol.T, b_final=sol.b_final, n_final=sol.report.n_final,
                   newton_residual=sol.report.final_residual)


def chebyshev_sigmas(sigma_min, sigma_max, num):
    if num == 1:
        return np.array([float(sigma_min)])
    return cheb_points(num, (sigma_min, sigma_max))


# -- top portion --------------------------------------------------------------

@dataclass
class Trajectory:
    """Dense solution of the angle-parametrized system, phi descending."""

    sigma: float
    phis: np.ndarray
    y: np.ndarray  # rows: r, u (and rdot, udot when present)
    dense: object = field(repr=False, default=None)

    @property
    def r(self):
        return self.y[0]

    @property
    def u(self):
        return self.y[1]

    def __call__(self, phi):
        return self.dense(phi)


def profile_rhs(phi, y, kappa=1.0):
    r, u = y[0], y[1]
    s, c = math.sin(phi), math.cos(phi)
    delta = kappa * r * u + s
    if not delta > 0:
        raise SingularStateError(f"r*u + sin(phi) = {delta:.3e} at phi={phi:.6g}")
    return [-r * c / delta, -r * s / delta]


def integrate_phi(rhs, y0, phi_start, phi_end, cfg: SolverConfig, sigma, events=None):
    sol = solve_ivp(rhs, (phi_start, phi_end), y0, method=cfg.ode_method,
                    rtol=cfg.ode_tol, atol=cfg.ode_tol, dense_output=True,
                    events=events)
    if sol.status == -1:
        raise SingularStateError(sol.message)
    phi_stop = sol.t[-1]
    samples = np.linspace(phi_start, phi_stop, cfg.n_dense)
    phis = np.union1d(samples, sol.t)
    phis = phis[::-1] if phi_end < phi_start else phis
    y = sol.sol(phis)
    y[:, 0] = y0  # initial data exactly
    return Trajectory(sigma, phis, y, sol.sol), sol


def top_portion(sigma: float, T: float, cfg: SolverConfig = SolverConfig()) -> Trajectory:
    """Integrate (r, u) from the vertical point phi = pi/2 down to phi = 0."""
    k = cfg.kappa
    traj, _ = integrate_phi(lambda p, y: profile_rhs(p, y, k), [sigma, T],
                            0.5 * math.pi, 0.0, cfg, sigma)
    return traj
