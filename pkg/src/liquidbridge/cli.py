"""Command-line driver.

Exit codes: 0 success, 1 numerical or verification failure, 2 usage or I/O
error. Every run writes ``run_manifest.json`` next to its artifacts.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, plotting
from .asymptotics import (extension_rows, seam_monotone, splice_tables,
                          sweep_variation_extended, turkington_T, turkington_Tprime)
from .bridge_profile import chebyshev_sigmas, solve_at, solve_T, sweep_T, top_portion
from .chebyshev import cheb_points
from .config import AsymptoticConfig, SolverConfig
from .errors import BridgeError, InvalidArgumentError
from .tables import TTable, fmt
from .tprime import differentiate_T
from .variation import HALF_PI, sweep_variation
from .verification import VerificationReport, verify_sigma, verify_table

log = logging.getLogger("liquidbridge")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MANIFEST = "run_manifest.json"


class UsageError(Exception):
    pass


class Run:
    """Output directory bookkeeping: refuses to clobber files without --force."""

    def __init__(self, args, command):
        self.out = Path(args.out)
        self.force = args.force
        self.command = command
        self.argv = list(args.argv)
        self.started = _dt.datetime.now(_dt.timezone.utc).isoformat()
        self.artifacts = []
        self.rows = []
        self.config = {}
        try:
            self.out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"cannot create {self.out}: {exc}") from exc
        self._claim(self.out / MANIFEST)

    def _claim(self, path):
        if path.exists() and not self.force:
            raise UsageError(f"{path} exists; pass --force to overwrite")
        return path

    def path(self, name):
        p = self._claim(self.out / name)
        p.parent.mkdir(parents=True, exist_ok=True)
        self.artifacts.append(str(p))
        return p

    def write_text(self, name, text):
        p = self.path(name)
        with open(p, "w", newline="") as fh:
            fh.write(text)
        return p

    def finish(self, status):
        manifest = {
            "schema": "liquidbridge-run/1",
            "version": __version__,
            "command": self.command,
            "argv": self.argv,
            "config": self.config,
            "started": self.started,
            "finished": _dt.datetime.now(_dt.timezone.utc).isoformat(),
            "exit_code": status,
            "rows": self.rows,
            "artifacts": self.artifacts,
        }
        with open(self.out / MANIFEST, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return status


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _count(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _solver_config(args):
    return SolverConfig(tol_abs=args.tol_abs, tol_newton=args.tol_newton,
                        tol_grid=args.tol_grid, n_init=args.n_init, n_max=args.n_max,
                        kappa=getattr(args, "kappa", 1.0), ode_tol=args.ode_tol)


def _workers(args):
    env = os.environ.get("BRIDGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"BRIDGE_THREADS must be an integer, got {env!r}")
    return max(1, args.threads or os.cpu_count() or 1)


def _row_summary(sample):
    return {"sigma": sample.sigma, "ok": sample.ok, "T": fmt(sample.T),
            "b_final": sample.b_final, "n_final": sample.n_final, "error": sample.error}


def _read_table(path):
    try:
        return TTable.read_csv(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except (InvalidArgumentError, KeyError) as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from exc


# -- subcommands ----------------------------------------------------------------

def cmd_profile(args):
    run = Run(args, "profile")
    cfg = _solver_config(args)
    run.config = {"solver": cfg.to_dict(), "sigma": args.sigma, "b": args.b, "psi_b": args.psi_b}
    try:
        if args.b is None and args.psi_b == 0.0:
            sol = solve_T(args.sigma, cfg)
            state, b, report = sol.state, sol.b_final, sol.report
        else:
            b = args.b if args.b is not None else max(cfg.b_init_floor, args.sigma + 4)
            state, report = solve_at(args.sigma, b, cfg, psi_b=args.psi_b)
        top = top_portion(args.sigma, state.T, cfg)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from exc
    except BridgeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return run.finish(EXIT_FAIL)

    lines = [f"# sigma={fmt(args.sigma)} b={fmt(b)} psi_b={fmt(args.psi_b)} T={fmt(state.T)}",
             f"# ell={fmt(state.ell)}", "tau,R,U,Psi"]
    lines += [",".join(fmt(x) for x in row)
              for row in zip(state.grid.nodes, state.R, state.U, state.Psi)]
    run.write_text("profile.csv", "\n".join(lines) + "\n")
    run.write_text("top_portion.csv", "phi,r,u\n" + "".join(
        f"{fmt(p)},{fmt(r)},{fmt(u)}\n" for p, r, u in zip(top.phis, top.r, top.u)))
    plotting.profile_figure(run.path("profile.svg"), state.R, state.U, top.r, top.u, b)
    run.rows.append({"sigma": args.sigma, "T": fmt(state.T), "b": b, "n_final": report.n_final,
                     "newton_iterations": report.iterations})
    print(f"T({args.sigma:g}) = {state.T:.15g}  (b = {b:g}, n = {report.n_final})")
    return run.finish(EXIT_OK)


def cmd_sweep_t(args):
    if args.sigma_max <= args.sigma_min and args.num > 1:
        raise UsageError("--sigma-max must exceed --sigma-min")
    if args.num < 1:
        raise UsageError("--num must be at least 1")
    run = Run(args, "sweep-t")
    cfg = _solver_config(args)
    run.config = {"solver": cfg.to_dict(), "sigma_min": args.sigma_min,
                  "sigma_max": args.sigma_max, "num": args.num}
    sigmas = chebyshev_sigmas(args.sigma_min, args.sigma_max, args.num)
    table = sweep_T(sigmas, cfg, _workers(args))
    run.rows = [_row_summary(s) for s in table]
    failed = table.failures
    if not failed and len(table) > 1:
        table = differentiate_T(table)
    run.write_text("T_table.csv", table.to_csv())
    run.write_text("b_sigma.csv", "sigma,b_final,n_final\n" + "".join(
        f"{fmt(s.sigma)},{fmt(s.b_final)},{'' if s.n_final is None else s.n_final}\n" for s in table))
    ok = [s for s in table if s.ok]
    if ok:
        sig = np.array([s.sigma for s in ok])
        interp = not failed
        plotting.chebyshev_data_figure(run.path("T.svg"), sig, np.array([s.T for s in ok]),
                                       r"$T(\sigma)$", interpolate=interp)
        plotting.b_figure(run.path("b.svg"), sig, np.array([s.b_final for s in ok]))
        if not failed and len(table) > 1:
            plotting.chebyshev_data_figure(run.path("Tprime.svg"), table.sigmas, table.Tprime,
                                           r"$T'(\sigma)$")
    for s in failed:
        print(f"row sigma={s.sigma:.17g} failed: {s.error}", file=sys.stderr)
    print(f"{len(table) - len(failed)}/{len(table)} rows converged")
    return run.finish(EXIT_FAIL if failed else EXIT_OK)


def _emit_sweep(run, report, prefix):
    run.write_text(f"{prefix}_summary.csv", report.summary_csv())
    for i, t in enumerate(report.trajectories):
        run.write_text(f"{prefix}_trajectories/{i:03d}.csv", t.to_csv())
    if report.trajectories:
        plotting.foliation_figure(run.path(f"{prefix}_foliation.svg"), report.trajectories)
        plotting.rdot_min_figure(run.path(f"{prefix}_min.svg"), report.trajectories)
    for r in report.rows:
        if r.error or r.flags:
            print(f"row sigma={r.sigma:.17g}: {r.error or ''} {' '.join(r.flags)}".rstrip(),
                  file=sys.stderr)
    run.rows = [{"sigma": r.sigma, "ok": r.trajectory is not None, "flags": list(r.flags),
                 "error": r.error,
                 "min_rdot": None if r.trajectory is None else fmt(r.trajectory.min_rdot)}
                for r in report.rows]
    verdict = report.all_positive
    cross = report.crossover_sigma()
    print(f"global min rdot = {report.global_min_rdot:.12g}")
    if not math.isnan(cross):
        print(f"largest sigma with minimum at phi = pi/2: {cross:.12g}")
    print("HYPOTHESIS-3 SATISFIED" if verdict else "HYPOTHESIS-3 NOT SATISFIED")
    return verdict


def _table_with_tprime(path):
    table = _read_table(path)
    if len(table) == 0:
        raise UsageError(f"{path} has no rows")
    if any(s.Tprime is None for s in table):
        raise UsageError(f"{path} lacks Tprime values; run sweep-t on a Chebyshev grid first")
    return table


def cmd_rdot(args):
    table = _table_with_tprime(args.table)
    run = Run(args, "rdot")
    cfg = _solver_config(args)
    run.config = {"solver": cfg.to_dict(), "table": str(args.table)}
    report = sweep_variation(table, cfg, _workers(args))
    return run.finish(EXIT_OK if _emit_sweep(run, report, "rdot") else EXIT_FAIL)


def cmd_extend(args):
    table = _table_with_tprime(args.table)
    try:
        acfg = AsymptoticConfig(args.sigma_lo, args.sigma_hi_asym, args.n_points,
                                args.n_keep, args.splice_hi)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from exc
    run = Run(args, "extend")
    cfg = _solver_config(args)
    run.config = {"solver": cfg.to_dict(), "asymptotic": acfg.to_dict(), "table": str(args.table)}
    try:
        spliced = splice_tables(table, acfg)
    except InvalidArgumentError as exc:
        raise UsageError(str(exc)) from exc
    run.write_text("extended_table.csv", spliced.to_csv())
    asym = cheb_points(acfg.n_points, (acfg.sigma_lo, acfg.sigma_hi_asym))
    plotting.extended_figure(run.path("T_extended.svg"), spliced, asym, turkington_T(asym),
                             "T", r"$T(\sigma)$")
    plotting.extended_figure(run.path("Tprime_extended.svg"), spliced, asym,
                             turkington_Tprime(asym), "Tprime", r"$T'(\sigma)$")
    monotone = seam_monotone(spliced)
    if not monotone:
        print("warning: spliced T is not strictly increasing across the seam", file=sys.stderr)
    ext = extension_rows(spliced, acfg)
    if len(ext) == 0:
        print("no rows below the splice radius; nothing to sweep")
        return run.finish(EXIT_OK if monotone else EXIT_FAIL)
    report = sweep_variation_extended(spliced, cfg, acfg, _workers(args))
    verdict = _emit_sweep(run, report, "rdot_extended")
    at_top = sum(1 for t in report.trajectories if t.argmin_phi == HALF_PI)
    print(f"minimum at phi = pi/2 for {at_top}/{len(report.trajectories)} extended rows")
    return run.finish(EXIT_OK if verdict and monotone else EXIT_FAIL)


def cmd_verify(args):
    if (args.sigma is None) == (args.table is None):
        raise UsageError("give exactly one of --sigma or --table")
    cfg = _solver_config(args)
    report = VerificationReport()
    if args.table is not None:
        table = _read_table(args.table)
        if len(table) == 0:
            raise UsageError(f"{args.table} has no rows")
        report = verify_table(table, cfg)
    else:
        for s in args.sigma:
            try:
                report.extend(verify_sigma(s, cfg))
            except BridgeError as exc:
                report.add(f"solve [sigma={s:g}]: {type(exc).__name__}", False)
    text = report.render()
    if args.out:
        run = Run(args, "verify")
        run.config = {"solver": cfg.to_dict()}
        run.write_text("verification.csv", text)
        run.rows = [{"name": c.name, "passed": c.passed} for c in report.checks]
    sys.stdout.write(text)
    status = EXIT_OK if report.passed else EXIT_FAIL
    print("ALL CHECKS PASSED" if status == EXIT_OK else "VERIFICATION FAILED")
    if args.out:
        run.finish(status)
    return status


# -- parser -----------------------------------------------------------------------

def _add_common(p, out_required=True):
    p.add_argument("--out", required=out_required, help="output directory")
    p.add_argument("--force", action="store_true", help="overwrite existing artifacts")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes for row sweeps (BRIDGE_THREADS overrides)")
    d = SolverConfig()
    g = p.add_argument_group("solver")
    g.add_argument("--tol-abs", type=_positive, default=d.tol_abs)
    g.add_argument("--tol-newton", type=_positive, default=d.tol_newton)
    g.add_argument("--tol-grid", type=_positive, default=d.tol_grid)
    g.add_argument("--n-init", type=int, default=d.n_init)
    g.add_argument("--n-max", type=int, default=d.n_max)
    g.add_argument("--ode-tol", type=_positive, default=d.ode_tol)
    g.add_argument("--kappa", type=_positive, default=d.kappa, help="capillary constant")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="liquidbridge",
        description="Unbounded liquid bridges: T(sigma), its derivative, and the rdot sweep.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="solve one bridge and draw its generating curve")
    p.add_argument("--sigma", type=_positive, required=True)
    p.add_argument("--b", type=_positive, default=None, help="fixed outer radius (skips b adaptation)")
    p.add_argument("--psi-b", type=float, default=0.0)
    _add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("sweep-t", help="T and T' on a Chebyshev grid of radii")
    p.add_argument("--sigma-min", type=_positive, default=0.085)
    p.add_argument("--sigma-max", type=_positive, default=2.0)
    p.add_argument("--num", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=cmd_sweep_t)

    p = sub.add_parser("rdot", help="variation sweep over a T table")
    p.add_argument("--table", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_rdot)

    d = AsymptoticConfig()
    p = sub.add_parser("extend", help="splice small-radius asymptotics and rerun the sweep")
    p.add_argument("--table", required=True)
    p.add_argument("--sigma-lo", type=_positive, default=d.sigma_lo)
    p.add_argument("--sigma-hi-asym", type=_positive, default=d.sigma_hi_asym)
    p.add_argument("--n-points", type=int, default=d.n_points)
    p.add_argument("--n-keep", type=_count, default=d.n_keep)
    p.add_argument("--splice-hi", type=_positive, default=d.splice_hi)
    _add_common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("verify", help="run the cross-check report")
    p.add_argument("--sigma", type=_positive, nargs="+")
    p.add_argument("--table")
    _add_common(p, out_required=False)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"liquidbridge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidArgumentError as exc:
        print(f"liquidbridge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
