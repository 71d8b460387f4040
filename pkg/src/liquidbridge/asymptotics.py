"""Small-radius extension of the T table.

Below the range the collocation solver handles comfortably, T and T' are
estimated from the leading-order asymptotics T ~ -sigma log(sigma) and
T' ~ -log(sigma) - 1. A handful of the smallest asymptotic points are
joined to the computed data and a natural cubic spline through the union
is sampled on a Chebyshev grid of the gap. Spline rows carry no accuracy
claim; they are tagged so downstream checks can exclude them.
"""

from __future__ import annotations

import numpy as np

from .chebyshev import cheb_points, cubic_spline
from .config import AsymptoticConfig, SolverConfig
from .errors import InvalidArgumentError
from .tables import TSample, TTable
from .variation import sweep_variation


def _check_small(sigma):
    s = np.asarray(sigma, dtype=float)
    if np.any(s <= 0) or np.any(s > 1):
        raise InvalidArgumentError("asymptotic estimates need 0 < sigma <= 1")
    return s


def turkington_T(sigma):
    s = _check_small(sigma)
    out = -s * np.log(s)
    return float(out) if out.ndim == 0 else out


def turkington_Tprime(sigma):
    s = _check_small(sigma)
    out = -np.log(s) - 1.0
    return float(out) if out.ndim == 0 else out


def _same(a, b):
    return abs(a - b) <= 1e-12 * max(abs(a), abs(b))


def splice_tables(computed: TTable, cfg: AsymptoticConfig = AsymptoticConfig()) -> TTable:
    if cfg.n_keep == 0:
        return TTable(list(computed))
    if computed.failures:
        raise InvalidArgumentError("computed table has failed rows")
    if any(s.Tprime is None for s in computed):
        raise InvalidArgumentError("computed table needs a Tprime column")
    comp_sig = computed.sigmas
    asym = cheb_points(cfg.n_points, (cfg.sigma_lo, cfg.sigma_hi_asym))[:cfg.n_keep]
    asym = np.array([s for s in asym
                     if s < comp_sig[0] and not any(_same(s, c) for c in comp_sig)])

    knots = np.concatenate([asym, comp_sig])
    spline_T = np.concatenate([turkington_T(asym), computed.T])
    spline_Tp = np.concatenate([turkington_Tprime(asym), computed.Tprime])
    query = cheb_points(cfg.n_points, (cfg.sigma_lo, cfg.splice_hi))
    query = query[(query >= knots[0]) & (query <= knots[-1])]
    T_q = cubic_spline(knots, spline_T, query)
    Tp_q = cubic_spline(knots, spline_Tp, query)

    rows = list(computed)
    for s, t, tp in zip(query, T_q, Tp_q):
        if any(_same(s, c) for c in comp_sig):
            continue
        if any(_same(s, a) for a in asym):
            rows.append(TSample(float(s), turkington_T(float(s)), turkington_Tprime(float(s)),
                                provenance="asymptotic"))
        else:
            rows.append(TSample(float(s), float(t), float(tp), provenance="spline"))
    rows.sort(key=lambda r: r.sigma)
    return TTable(rows)


def seam_monotone(table: TTable) -> bool:
    """Post-hoc audit: T strictly increasing across the whole spliced table."""
    return bool(np.all(np.diff(table.T) > 0))


def extension_rows(spliced: TTable, cfg: AsymptoticConfig = AsymptoticConfig()) -> TTable:
    return spliced.select(spliced.sigmas <= cfg.splice_hi * (1 + 1e-12))


def sweep_variation_extended(spliced: TTable, cfg: SolverConfig = SolverConfig(),
                             acfg: AsymptoticConfig = AsymptoticConfig(), workers: int = 1):
    """Variation sweep over the extension, sigma in [sigma_lo, splice_hi]."""
    return sweep_variation(extension_rows(spliced, acfg), cfg, workers)


def asymptotic_ratio_error(sigma, T):
    """|T / (-sigma log sigma) - 1|."""
    return abs(T / turkington_T(sigma) - 1.0)


__all__ = ["turkington_T", "turkington_Tprime", "splice_tables", "seam_monotone",
           "extension_rows", "sweep_variation_extended", "asymptotic_ratio_error"]
