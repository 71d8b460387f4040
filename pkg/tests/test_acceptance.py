"""Acceptance criteria, one test per criterion.

Each test appends a ``CRITERION k: PASS|FAIL ...`` line that is printed in
the terminal summary, and asserts the criterion at its stated tolerance.
"""

import filecmp
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, TIMINGS
from liquidbridge import cli
from liquidbridge.asymptotics import (asymptotic_ratio_error, splice_tables,
                                      sweep_variation_extended)
from liquidbridge.bridge_profile import solve_at, solve_T
from liquidbridge.chebyshev import ChebGrid, bary_eval, diff_operator
from liquidbridge.config import AsymptoticConfig
from liquidbridge.shooting import shoot_T
from liquidbridge.spectral_bvp import BvpProblem, fd_mismatch, newton_solve
from liquidbridge.tprime import integrate_Tprime
from liquidbridge.variation import HALF_PI, integrate_variation
from liquidbridge.verification import volume_check, vogel_bounds_check

pytestmark = pytest.mark.slow


def report(k, ok, detail):
    ACCEPTANCE_LINES.append(f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def test_criterion_1_shooting_oracle(solutions):
    t0 = time.perf_counter()
    worst = 0.0
    for s in (0.1, 0.5, 1.0, 2.0):
        worst = max(worst, abs(shoot_T(s, width=1e-10) - solutions(s).T))
    elapsed = time.perf_counter() - t0
    report(1, worst < 1e-8 and elapsed < 60,
           f"max |T_shoot - T_spectral| = {worst:.2e} (< 1e-8), {elapsed:.1f} s (< 60 s)")


def test_criterion_2_sweep(sweep_table, cfg):
    T = sweep_table.T
    top = [integrate_variation(r.sigma, r.T, 0.0, cfg) for r in sweep_table]
    vogel = all(vogel_bounds_check(r.sigma, r.T, t.r[-1]) for r, t in zip(sweep_table, top))
    ok = (len(sweep_table) == 100 and not sweep_table.failures and np.all(np.diff(T) > 0)
          and T.max() < math.sqrt(2) and vogel and TIMINGS["sweep_T"] < 300)
    report(2, ok, f"100/100 converged={not sweep_table.failures}, increasing={np.all(np.diff(T) > 0)}, "
                  f"max T = {T.max():.6f} < sqrt 2, Vogel={vogel}, sweep {TIMINGS['sweep_T']:.1f} s")


def test_criterion_3_truncation(solutions, cfg):
    worst_step, worst_far = 0.0, 0.0
    for s in (0.1, 1.0, 2.0):
        sol = solutions(s)
        worst_step = max(worst_step, abs(sol.b_history[-1][1] - sol.b_history[-2][1]))
        far, _ = solve_at(s, sol.b_final + 4, cfg)
        worst_far = max(worst_far, abs(far.T - sol.T))
    report(3, worst_step < 1e-11 and worst_far < 5e-11,
           f"|T_b - T_(b-2)| = {worst_step:.2e} (< 1e-11), |T_(b+4) - T_b| = {worst_far:.2e} (< 5e-11)")


def test_criterion_4_spectral(solutions, cfg):
    worst = 0.0
    for s in (0.1, 1.0, 2.0):
        sol = solutions(s)
        m = int(round(1.5 * sol.state.n))
        fine, rep = newton_solve(sol.state.resample(m), BvpProblem(s, sol.b_final, 0.0, cfg.kappa), cfg)
        assert rep.converged
        worst = max(worst, abs(fine.T - sol.T))
    report(4, worst < 1e-10, f"max |T_n - T_1.5n| = {worst:.2e} (< 1e-10)")


def test_criterion_5_jacobian(solutions, cfg):
    sol = solutions(1.0)
    problem = BvpProblem(1.0, sol.b_final, 0.0, cfg.kappa)
    rng = np.random.default_rng(2024)
    steps = np.array([1e-5, 1e-6, 1e-7])
    slopes = []
    for _ in range(5):
        d = rng.uniform(-1.0, 1.0, 3 * sol.state.n + 1)
        err = fd_mismatch(sol.state, problem, d, steps)
        slopes.append(np.polyfit(np.log10(steps), np.log10(err), 1)[0])
    ok = all(abs(p - 1.0) <= 0.2 for p in slopes)
    report(5, ok, "slopes " + ", ".join(f"{p:.3f}" for p in slopes) + " (1.0 +/- 0.2)")


def test_criterion_6_volume(solutions, cfg):
    errs = [volume_check(s, solutions(s).T, cfg=cfg).rel_error for s in (0.1, 1.0, 2.0)]
    report(6, max(errs) < 1e-8, "relative V mismatch " + ", ".join(f"{e:.1e}" for e in errs) + " (< 1e-8)")


def test_criterion_7_hypothesis3(variation_report):
    trajs = variation_report.trajectories
    rdot_ok = variation_report.all_positive and len(trajs) == 100
    udot_ok = all(np.all(t.udot[t.phis > 0] > 0) for t in trajs)
    where = np.array([t.argmin_phi for t in trajs])
    sig = np.array([t.sigma for t in trajs])
    at_top, at_zero = where == HALF_PI, where == 0.0
    pattern = bool(np.all(at_top | at_zero) and at_top.any() and at_zero.any()
                   and sig[at_top].max() < sig[at_zero].min())
    cross = variation_report.crossover_sigma()
    ok = rdot_ok and udot_ok and pattern and TIMINGS["sweep_variation"] < 120
    report(7, ok, f"min rdot = {variation_report.global_min_rdot:.6f} > 0, udot > 0={udot_ok}, "
                  f"argmin pattern={pattern} (crossover sigma = {cross:.6f}), "
                  f"{TIMINGS['sweep_variation']:.1f} s")


def test_criterion_8_tprime(sweep_table, cfg):
    h = 1e-4
    idx = (20, 35, 50, 65, 80)
    fd_err = 0.0
    for i in idx:
        s = sweep_table[i].sigma
        fd = (solve_T(s + h, cfg).T - solve_T(s - h, cfg).T) / (2 * h)
        fd_err = max(fd_err, abs(fd - sweep_table[i].Tprime))
    T0 = sweep_table[0].T
    cc_err = max(abs(T0 + integrate_Tprime(sweep_table, sweep_table[i].sigma) - sweep_table[i].T)
                 for i in idx + (99,))
    report(8, fd_err < 1e-5 and cc_err < 1e-8,
           f"|T'_spectral - T'_fd| = {fd_err:.1e} (< 1e-5), |T0 + int T' - T| = {cc_err:.1e} (< 1e-8)")


def test_criterion_9_asymptotics(sweep_table, cfg):
    sig = (0.01, 0.005, 0.002)
    ratios = [asymptotic_ratio_error(s, shoot_T(s)) for s in sig]
    decreasing = ratios[0] > ratios[1] > ratios[2]
    acfg = AsymptoticConfig()
    ext = sweep_variation_extended(splice_tables(sweep_table, acfg), cfg, acfg)
    at_top = all(t.argmin_phi == HALF_PI for t in ext.trajectories)
    ok = decreasing and ext.all_positive and at_top and len(ext.trajectories) > 0
    report(9, ok, "|T/(-s log s) - 1| = " + ", ".join(f"{r:.4f}" for r in ratios)
           + f"; extended rows {len(ext.trajectories)}, all_positive={ext.all_positive}, "
             f"argmin at pi/2={at_top}")


def _chebyshev_layer():
    # monomial exactness, scaled by max |d/dx x^k| on the row grid
    worst = 0.0
    for interval in ((-1.0, 1.0), (0.085, 2.0)):
        for n in range(3, 65):
            src = ChebGrid(n, interval).nodes
            for rows in (n, n - 1):
                D = diff_operator(rows, n, 1, interval)
                x = ChebGrid(rows, interval).nodes
                for k in range(n):
                    exact = k * x ** (k - 1) if k else np.zeros_like(x)
                    scale = max(np.abs(exact).max(), 1.0)
                    worst = max(worst, np.abs(D @ src**k - exact).max() / scale)
    probe = np.linspace(-1, 1, 1001)
    errs = [np.abs(bary_eval(ChebGrid(n), np.exp(ChebGrid(n).nodes), probe) - np.exp(probe)).max()
            for n in (4, 6, 8, 10, 12)]
    geometric = all(b < 0.05 * a for a, b in zip(errs[:-1], errs[1:]))
    return worst, errs, geometric


def _csv_bytes_equal(tmp_path):
    dirs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        for argv in (["sweep-t", "--sigma-min", "0.085", "--sigma-max", "2", "--num", "12",
                      "--out", str(out / "sweep")],
                     ["rdot", "--table", str(out / "sweep" / "T_table.csv"), "--out", str(out / "rdot")],
                     ["extend", "--table", str(out / "sweep" / "T_table.csv"), "--out", str(out / "ext")],
                     ["verify", "--sigma", "1", "--out", str(out / "verify")]):
            assert cli.main(argv) == 0
        dirs.append(out)
    files = sorted(p.relative_to(dirs[0]) for p in dirs[0].rglob("*.csv"))
    same = all(filecmp.cmp(dirs[0] / f, dirs[1] / f, shallow=False) for f in files)
    return same, len(files)


def test_criterion_10_chebyshev_and_determinism(tmp_path):
    worst, errs, geometric = _chebyshev_layer()
    same, nfiles = _csv_bytes_equal(tmp_path)
    report(10, worst < 1e-11 and geometric and same and nfiles > 10,
           f"max scaled differentiation error {worst:.1e} (< 1e-11), exp errors "
           + " ".join(f"{e:.0e}" for e in errs) + f", {nfiles} CSVs byte-identical={same}")
