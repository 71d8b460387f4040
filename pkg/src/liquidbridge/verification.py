"""Cross-checks built from the known identities and bounds for the family.

Each check yields a :class:`Check` record; :class:`VerificationReport`
renders them one per line as ``name,status,value,tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bridge_profile import ProfileSolution, Trajectory, solve_at, solve_T
from .chebyshev import clenshaw_curtis
from .config import SolverConfig
from .errors import BridgeError, InvalidArgumentError, SingularStateError
from .spectral_bvp import BvpProblem, residual
from .tables import TTable, fmt
from .variation import HALF_PI, integrate_lower, integrate_variation

SQRT2 = math.sqrt(2.0)


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float

    def line(self):
        return f"{self.name},{'PASS' if self.passed else 'FAIL'},{fmt(self.value)},{fmt(self.tolerance)}"


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name, passed, value=math.nan, tolerance=math.nan):
        self.checks.append(Check(name, bool(passed), float(value), float(tolerance)))

    def extend(self, other):
        self.checks.extend(other.checks)

    @property
    def passed(self):
        return bool(self.checks) and all(c.passed for c in self.checks)

    def render(self):
        return "name,status,value,tolerance\n" + "".join(c.line() + "\n" for c in self.checks)


@dataclass
class VolumeCheck:
    rho0: float
    phi0: float
    phi_minus: float
    V_closed: float
    V_quadrature: float
    Delta_at_phi_minus: float

    @property
    def rel_error(self):
        return abs(self.V_closed - self.V_quadrature) / abs(self.V_closed)


@dataclass
class FullProfile:
    """Top portion joined to the lower portion, parametrized by angle."""

    top: Trajectory
    lower: Trajectory
    kappa: float = 1.0

    @property
    def phi_min(self):
        return float(self.top.phis[-1])

    @property
    def phi_max(self):
        return float(self.lower.phis[-1])

    def __call__(self, phi):
        phi = float(phi)
        if not self.phi_min - 1e-14 <= phi <= self.phi_max + 1e-14:
            raise InvalidArgumentError(f"phi={phi} outside [{self.phi_min}, {self.phi_max}]")
        part = self.top if phi <= HALF_PI else self.lower
        return part(phi)[:2]

    def dudphi(self, phi):
        """du/dphi from the equations, vectorized over ``phi``."""
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        ru = np.array([self(p) for p in phi]).T
        r, u = ru
        s = np.sin(phi)
        return r, -r * s / (self.kappa * r * u + s)


def full_profile(sigma, T, phi0, cfg: SolverConfig = SolverConfig(), Tprime=0.0):
    """Profile spanning [phi0, phi^-], where phi^- is the lower crossing of r(phi0)."""
    if not 0 <= phi0 < HALF_PI:
        raise InvalidArgumentError("phi0 must lie in [0, pi/2)")
    top = integrate_variation(sigma, T, Tprime, cfg)
    top_traj = Trajectory(sigma, top.phis, np.vstack([top.r, top.u, top.rdot, top.udot]), top.dense)
    rho0 = float(top.dense(phi0)[0])
    lower = integrate_lower(sigma, T, Tprime, math.pi - 1e-6, cfg, r_stop=rho0)
    return FullProfile(top_traj, lower, cfg.kappa), rho0


def volume_closed_form(profile: FullProfile, phi, rho0, phi0) -> float:
    r, u = profile(phi)
    k = profile.kappa
    return math.pi * (r * r - rho0 * rho0) * u + 2 * math.pi / k * (r * math.sin(phi) - rho0 * math.sin(phi0))


def volume_quadrature(profile: FullProfile, phi, rho0, phi0, order=128) -> float:
    """Washer volume between the cylinder r = rho0 and the curve, by Clenshaw-Curtis.

    The integrand is r^2 du/dphi from the equations; pieces on either side
    of the vertical point are integrated separately.
    """
    u0 = profile(phi0)[1]
    u_end = profile(phi)[1]

    def integrand(p):
        r, du = profile.dudphi(p)
        return -r * r * du

    cuts = [phi0] + ([HALF_PI] if phi0 < HALF_PI < phi else []) + [phi]
    washers = sum(clenshaw_curtis(integrand, a, b, order + 1) for a, b in zip(cuts[:-1], cuts[1:]))
    return math.pi * rho0 * rho0 * (u0 - u_end) - math.pi * washers


def volume_check(sigma, T, phi0=math.pi / 4, cfg: SolverConfig = SolverConfig(), order=128):
    # RK45 dense output at 1e-11 limits V to ~1e-8 relative for small sigma
    cfg = cfg.replace(ode_tol=min(cfg.ode_tol, 1e-13))
    profile, rho0 = full_profile(sigma, T, phi0, cfg)
    phi_minus = profile.phi_max
    r, u = profile(phi_minus)
    delta = cfg.kappa * r * u + math.sin(phi_minus)
    return VolumeCheck(rho0, phi0, phi_minus,
                       volume_closed_form(profile, phi_minus, rho0, phi0),
                       volume_quadrature(profile, phi_minus, rho0, phi0, order),
                       delta)


def vprime_criterion(trajectory: Trajectory, kappa: float = 1.0) -> float:
    """2 pi rdot Delta at the last point of a trajectory (phi^- by construction)."""
    phi = float(trajectory.phis[-1])
    r, u, rvar = trajectory.y[0, -1], trajectory.y[1, -1], trajectory.y[2, -1]
    delta = kappa * r * u + math.sin(phi)
    if not delta > 0:
        raise SingularStateError("Delta is non-positive at phi^-")
    return 2 * math.pi * rvar * delta


def vogel_bounds(sigma, T):
    return math.sqrt(sigma / T + sigma**2), math.sqrt(2 * sigma / T + sigma**2)


def vogel_bounds_check(sigma: float, T: float, r_at_0: float, slack: float = 1e-9) -> bool:
    lo, hi = vogel_bounds(sigma, T)
    return lo * (1 - slack) <= r_at_0 <= hi * (1 + slack)


def concavity_max(top: Trajectory) -> float:
    """Largest d2u/dr2 over interior top-portion samples (negative means concave)."""
    phi, r, u = top.phis, top.y[0], top.y[1]
    inside = (phi > 0) & (phi < HALF_PI)
    phi, r, u = phi[inside], r[inside], u[inside]
    c = np.cos(phi)
    d2 = (r * u + np.sin(phi)) / (-r * c**3)
    return float(d2.max())


# -- aggregate reports ---------------------------------------------------------

def verify_solution(sol: ProfileSolution, cfg: SolverConfig = SolverConfig(),
                    truncation=True) -> VerificationReport:
    rep = VerificationReport()
    s, T = sol.sigma, sol.T
    tag = f"[sigma={s:.6g}]"
    st = sol.state
    res = residual(st, BvpProblem(s, sol.b_final, 0.0, cfg.kappa))
    rep.add(f"boundary-conditions {tag}", np.abs(res[-4:]).max() < 1e-10, np.abs(res[-4:]).max(), 1e-10)
    rep.add(f"collocation-residual {tag}", np.abs(res).max() < 1e-8, np.abs(res).max(), 1e-8)
    rep.add(f"height-bound {tag}", 0 < T < SQRT2, T, SQRT2)
    mono = np.diff(st.U).max()
    rep.add(f"lower-profile-descending {tag}", mono < 0 and st.U.min() > 0, mono, 0.0)
    if truncation:
        far, _ = solve_at(s, sol.b_final + 4, cfg, start=None)
        rep.add(f"truncation-insensitive {tag}", abs(far.T - T) < 5 * cfg.tol_abs,
                abs(far.T - T), 5 * cfg.tol_abs)
    rep.extend(verify_height(s, T, cfg))
    return rep


def verify_height(sigma, T, cfg: SolverConfig = SolverConfig()) -> VerificationReport:
    """Checks that need only (sigma, T): Vogel sandwich, concavity, volume identity."""
    rep = VerificationReport()
    tag = f"[sigma={sigma:.6g}]"
    try:
        top = integrate_variation(sigma, T, 0.0, cfg)
        r0 = float(top.r[-1])
        lo, hi = vogel_bounds(sigma, T)
        rep.add(f"vogel-sandwich {tag}", vogel_bounds_check(sigma, T, r0),
                min(r0 - lo, hi - r0), 0.0)
        traj = Trajectory(sigma, top.phis, np.vstack([top.r, top.u]))
        cm = concavity_max(traj)
        rep.add(f"top-concave {tag}", cm < 0, cm, 0.0)
        vc = volume_check(sigma, T, cfg=cfg)
        rep.add(f"volume-identity {tag}", vc.rel_error < 1e-8 and vc.Delta_at_phi_minus > 0,
                vc.rel_error, 1e-8)
    except BridgeError as exc:
        rep.add(f"integration {tag}: {exc}", False)
    return rep


def verify_table(table: TTable, cfg: SolverConfig = SolverConfig(), pairs=10, seed=0) -> VerificationReport:
    rep = VerificationReport()
    ok = [s for s in table if s.ok]
    rep.add("rows-converged", len(ok) == len(table), len(table) - len(ok), 0)
    if not ok:
        return rep
    T = np.array([s.T for s in ok])
    d = np.diff(T).min() if len(T) > 1 else 1.0
    rep.add("T-increasing", d > 0, d, 0.0)
    rep.add("height-bound", T.max() < SQRT2 and T.min() > 0, T.max(), SQRT2)
    for s in ok:
        rep.extend(verify_height(s.sigma, s.T, cfg))
    rep.extend(check_no_equal_heights(ok, cfg, pairs, seed))
    return rep


def check_no_equal_heights(samples, cfg, pairs=10, seed=0) -> VerificationReport:
    """Distinct profiles never share a height at the same angle on the top portion.

    For random pairs the height difference at common angles must keep the
    sign of the radius difference.
    """
    rep = VerificationReport()
    if len(samples) < 2:
        return rep
    rng = np.random.default_rng(seed)
    phis = np.linspace(HALF_PI, 0.0, cfg.n_dense)
    tops = {}
    for _ in range(pairs):
        i, j = sorted(rng.choice(len(samples), size=2, replace=False))
        a, b = samples[i], samples[j]
        for s in (a, b):
            if s.sigma not in tops:
                tops[s.sigma] = integrate_variation(s.sigma, s.T, 0.0, cfg).dense
        gap = (tops[b.sigma](phis)[1] - tops[a.sigma](phis)[1]).min()
        rep.add(f"no-equal-height [sigma={a.sigma:.6g},{b.sigma:.6g}]", gap > 0, gap, 0.0)
    return rep


def verify_sigma(sigma, cfg: SolverConfig = SolverConfig()) -> VerificationReport:
    return verify_solution(solve_T(sigma, cfg), cfg)
