"""Variation of the profile with respect to the vertical-point radius.

Differentiating the angle-parametrized profile equations in sigma gives a
linear system for (rdot, udot) that shares the denominator
Delta = kappa r u + sin(phi). It is integrated together with the profile
from phi = pi/2, where rdot = 1 and udot = T'(sigma), down to phi = 0. A
strictly positive rdot on the whole top portion, for every sigma, is the
uniqueness condition being tested numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bridge_profile import Trajectory, integrate_phi
from .config import SolverConfig
from .errors import BridgeError, InvalidArgumentError, SingularStateError
from .tables import TTable

HALF_PI = 0.5 * math.pi


def variation_rhs(phi, state, kappa=1.0):
    """Right-hand side of the profile system with its sigma-variation appended."""
    r, u, rdot, udot = state
    s, c = math.sin(phi), math.cos(phi)
    delta = kappa * r * u + s
    if not delta > 0:
        raise SingularStateError(f"r*u + sin(phi) = {delta:.3e} at phi={phi:.6g}")
    g = (kappa * udot * r * r - rdot * s) / (delta * delta)
    return [-r * c / delta, -r * s / delta, c * g, s * g]


@dataclass
class VariationTrajectory:
    sigma: float
    phis: np.ndarray
    r: np.ndarray
    u: np.ndarray
    rdot: np.ndarray
    udot: np.ndarray
    min_rdot: float
    argmin_phi: float
    rdot_at_0: float
    T: float = math.nan
    Tprime: float = math.nan
    dense: object = field(default=None, repr=False)

    @property
    def delta(self):
        return self.r * self.u + np.sin(self.phis)

    def to_csv(self) -> str:
        from .tables import fmt
        lines = ["phi,r,u,rdot,udot"]
        for row in zip(self.phis, self.r, self.u, self.rdot, self.udot):
            lines.append(",".join(fmt(x) for x in row))
        return "\n".join(lines) + "\n"


def _from_trajectory(traj: Trajectory, T, Tprime):
    rdot = traj.y[2]
    i = int(np.argmin(rdot))
    return VariationTrajectory(
        traj.sigma, traj.phis, traj.y[0], traj.y[1], rdot, traj.y[3],
        float(rdot[i]), float(traj.phis[i]), float(rdot[-1]), T, Tprime, traj.dense)


def integrate_variation(sigma: float, T: float, Tprime: float,
                        cfg: SolverConfig = SolverConfig()) -> VariationTrajectory:
    """Top portion, phi from pi/2 down to 0, with (rdot, udot)."""
    k = cfg.kappa
    y0 = [sigma, T, 1.0, Tprime]
    traj, _ = integrate_phi(lambda p, y: variation_rhs(p, y, k), y0, HALF_PI, 0.0, cfg, sigma)
    return _from_trajectory(traj, T, Tprime)


def integrate_lower(sigma: float, T: float, Tprime: float, phi_end: float,
                    cfg: SolverConfig = SolverConfig(), r_stop: float | None = None) -> Trajectory:
    """Lower portion, phi increasing from pi/2 towards ``phi_end`` < pi.

    With ``r_stop`` the integration halts where the radius first reaches it
    (this is how phi^- is located for a given rho_0). The lower portion is
    the unstable direction of the exterior problem, so only moderate
    distances past the vertical point are meaningful.
    """
    if not HALF_PI < phi_end < math.pi:
        raise InvalidArgumentError("phi_end must lie in (pi/2, pi)")
    k = cfg.kappa
    events = None
    if r_stop is not None:
        def hit(p, y):
            return y[0] - r_stop
        hit.terminal, hit.direction = True, 1
        events = [hit]
    traj, sol = integrate_phi(lambda p, y: variation_rhs(p, y, k), [sigma, T, 1.0, Tprime],
                              HALF_PI, phi_end, cfg, sigma, events=events)
    if r_stop is not None and not len(sol.t_events[0]):
        raise InvalidArgumentError(f"radius {r_stop} not reached before phi={phi_end}")
    return traj


def integrate_height_variation(rho0: float, u0: float, phi_end: float,
                               cfg: SolverConfig = SolverConfig()) -> Trajectory:
    """Profile through (rho0, u0) with a horizontal tangent, varied in u0.

    Same right-hand side, anchored at phi = 0 with the accented variation
    starting from (0, 1).
    """
    if not 0 < phi_end < math.pi:
        raise InvalidArgumentError("phi_end must lie in (0, pi)")
    k = cfg.kappa
    traj, _ = integrate_phi(lambda p, y: variation_rhs(p, y, k), [rho0, u0, 0.0, 1.0],
                            0.0, phi_end, cfg, rho0)
    return traj


@dataclass
class SweepRow:
    sigma: float
    trajectory: VariationTrajectory | None = None
    error: str | None = None
    flags: tuple = ()


@dataclass
class SweepReport:
    rows: list

    @property
    def trajectories(self):
        return [r.trajectory for r in self.rows if r.trajectory is not None]

    @property
    def failures(self):
        return [r for r in self.rows if r.trajectory is None]

    @property
    def flagged(self):
        return [r for r in self.rows if r.flags]

    @property
    def global_min_rdot(self):
        mins = [t.min_rdot for t in self.trajectories]
        return min(mins) if mins else math.nan

    @property
    def all_positive(self):
        return bool(self.trajectories) and not self.failures and \
            all(t.min_rdot > 0 for t in self.trajectories)

    def summary_csv(self) -> str:
        from .tables import fmt
        lines = ["sigma,min_rdot,argmin_phi,rdot_at_0"]
        for r in self.rows:
            t = r.trajectory
            if t is None:
                lines.append(f"{fmt(r.sigma)},,,")
            else:
                lines.append(",".join(fmt(x) for x in (t.sigma, t.min_rdot, t.argmin_phi, t.rdot_at_0)))
        return "\n".join(lines) + "\n"

    def crossover_sigma(self):
        """Largest radius whose minimum sits at phi = pi/2, or nan."""
        small = [t.sigma for t in self.trajectories if t.argmin_phi == HALF_PI]
        return max(small) if small else math.nan


def _sweep_one(sample, cfg):
    flags = []
    if sample.Tprime is None or not math.isfinite(sample.Tprime):
        return SweepRow(sample.sigma, error="missing Tprime")
    if not sample.ok:
        return SweepRow(sample.sigma, error=sample.error or "missing T")
    if sample.Tprime < 0:
        flags.append("negative-Tprime")
    try:
        traj = integrate_variation(sample.sigma, sample.T, sample.Tprime, cfg)
    except BridgeError as exc:
        return SweepRow(sample.sigma, error=f"{type(exc).__name__}: {exc}", flags=tuple(flags))
    if traj.min_rdot <= 0:
        flags.append("nonpositive-rdot")
    return SweepRow(sample.sigma, traj, flags=tuple(flags))


def sweep_variation(table: TTable, cfg: SolverConfig = SolverConfig(), workers: int = 1) -> SweepReport:
    samples = list(table)
    if workers > 1 and len(samples) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_one, samples, [cfg] * len(samples)))
    else:
        rows = [_sweep_one(s, cfg) for s in samples]
    return SweepReport(rows)
