"""Shooting/bisection oracle for T(sigma).

Independent of the collocation solver: the arclength system is integrated
outward from the vertical point (sigma, T_guess) with psi = -pi/2. A guess
that is too low makes the curve cross the reference level u = 0 while
still descending; a guess that is too high makes the inclination turn back
upward (psi crosses 0 while u > 0). The height of the vertical point is the
separatrix between the two behaviours.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

from .errors import InvalidArgumentError

TOO_LOW, TOO_HIGH = -1, 1


def _rhs(kappa):
    def f(s, y):
        r, u, psi = y
        return [math.cos(psi), math.sin(psi), kappa * u - math.sin(psi) / r]
    return f


def _hits_axis(s, y):
    return y[1]


_hits_axis.terminal = True
_hits_axis.direction = -1


def _turns_up(s, y):
    return y[2]


_turns_up.terminal = True
_turns_up.direction = 1


def classify(sigma, t_guess, kappa=1.0, tol=1e-13, s_max=400.0):
    """Return TOO_LOW or TOO_HIGH for a trial vertical-point height."""
    sol = solve_ivp(_rhs(kappa), (0.0, s_max), [sigma, t_guess, -0.5 * math.pi],
                    method="DOP853", rtol=tol, atol=tol,
                    events=(_hits_axis, _turns_up))
    low, high = (len(e) > 0 for e in sol.t_events)
    if low and high:
        return TOO_LOW if sol.t_events[0][0] < sol.t_events[1][0] else TOO_HIGH
    if low:
        return TOO_LOW
    if high:
        return TOO_HIGH
    # still hugging the axis at s_max: undecidable at this resolution
    return TOO_HIGH if sol.y[2, -1] > 0 or sol.y[1, -1] > 0 else TOO_LOW


def shoot_T(sigma, kappa=1.0, width=1e-10, bracket=(0.0, 1.5), tol=1e-13):
    """Bisect the trial height to a bracket of ``width``; returns the midpoint."""
    if not sigma > 0:
        raise InvalidArgumentError("sigma must be positive")
    lo, hi = bracket
    lo = max(lo, 1e-300)
    if classify(sigma, lo, kappa, tol) != TOO_LOW or classify(sigma, hi, kappa, tol) != TOO_HIGH:
        raise InvalidArgumentError(f"bracket {bracket} does not straddle T({sigma})")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if classify(sigma, mid, kappa, tol) == TOO_LOW:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def shoot_T_all(sigmas, **kw):
    return np.array([shoot_T(s, **kw) for s in sigmas])
