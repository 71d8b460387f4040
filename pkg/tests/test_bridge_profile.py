import math

import numpy as np
import pytest

from conftest import ORACLE_T
from liquidbridge.bridge_profile import (chebyshev_sigmas, initial_guess, profile_rhs,
                                         rescale_state, solve_T, sweep_T, top_portion)
from liquidbridge.chebyshev import ChebGrid
from liquidbridge.config import AsymptoticConfig, SolverConfig
from liquidbridge.errors import InvalidArgumentError, TruncationError
from liquidbridge.shooting import TOO_HIGH, TOO_LOW, classify, shoot_T
from liquidbridge.verification import vogel_bounds_check


class TestConfig:
    def test_defaults(self):
        c = SolverConfig()
        assert (c.tol_abs, c.b_init_floor, c.b_step, c.kappa, c.ode_tol) == (1e-11, 14, 2, 1, 1e-11)

    @pytest.mark.parametrize("kw", [dict(tol_abs=0), dict(n_init=2), dict(n_init=50, n_max=40),
                                    dict(n_growth=1.0), dict(kappa=-1)])
    def test_invalid(self, kw):
        with pytest.raises(InvalidArgumentError):
            SolverConfig(**kw)

    def test_replace_and_dict(self):
        c = SolverConfig().replace(ode_tol=1e-12)
        assert c.ode_tol == 1e-12 and c.to_dict()["ode_tol"] == 1e-12

    def test_asymptotic_invalid(self):
        with pytest.raises(InvalidArgumentError):
            AsymptoticConfig(sigma_lo=0.1, sigma_hi_asym=0.05)


class TestInitialGuess:
    def test_values(self):
        st = initial_guess(1.0, 14.0, ChebGrid(21))
        assert st.R[0] == 1.0 and st.U[0] == 1.0 and st.Psi[0] == pytest.approx(-math.pi / 4, abs=1e-15)
        assert st.R[-1] == 14.0 and st.U[-1] == pytest.approx(math.exp(-13.0), rel=1e-14)
        assert st.ell == 13.0

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            initial_guess(3.0, 2.0, ChebGrid(5))


def test_rescale_state_endpoints():
    st = initial_guess(0.5, 14.0, ChebGrid(15))
    new = rescale_state(st, 0.5, 14.0, 16.0)
    assert new.R[0] == 0.5 and new.R[-1] == 16.0
    assert np.all(np.diff(new.R) > 0)
    assert new.ell == pytest.approx(st.ell * 15.5 / 13.5)
    assert np.array_equal(new.U, st.U)


class TestSolveT:
    @pytest.mark.parametrize("sigma", [0.085, 1.0, 2.0])
    def test_oracle(self, solutions, sigma):
        assert abs(solutions(sigma).T - ORACLE_T[sigma]) < 1e-8

    def test_truncation_history(self, solutions):
        sol = solutions(1.0)
        bs = [b for b, _, _ in sol.b_history]
        assert bs[0] == 14.0 and np.all(np.diff(bs) == 2.0) and bs[-1] == sol.b_final
        assert abs(sol.T - sol.previous_T) < 1e-11

    def test_profile_invariants(self, solutions):
        sol = solutions(0.5)
        st = sol.state
        assert 0 < sol.T < math.sqrt(2)
        assert np.all(np.diff(st.U) < 0) and np.all(st.U > 0)
        assert sol.ell == st.ell

    def test_invalid_sigma(self):
        with pytest.raises(InvalidArgumentError):
            solve_T(0.0)

    def test_b_cap(self):
        with pytest.raises(TruncationError):
            solve_T(1.0, SolverConfig(b_max=15, tol_abs=1e-20))


class TestSweep:
    def test_single_row_matches_solve(self, solutions):
        table = sweep_T([1.0])
        assert len(table) == 1 and table[0].T == solutions(1.0).T
        assert table[0].b_final == solutions(1.0).b_final

    def test_failure_is_recorded(self):
        table = sweep_T([0.5, 1.0], SolverConfig(n_init=10, n_max=12))
        assert len(table.failures) == 2
        assert all("ConvergenceError" in s.error for s in table)

    def test_parallel_matches_serial(self):
        s = chebyshev_sigmas(0.5, 1.5, 4)
        a, b = sweep_T(s), sweep_T(s, workers=2)
        assert a.to_csv() == b.to_csv()

    @pytest.mark.parametrize("bad", [[], [1.0, 0.5], [-1.0, 1.0], [[1.0]]])
    def test_invalid(self, bad):
        with pytest.raises(InvalidArgumentError):
            sweep_T(bad)

    def test_full_sweep(self, sweep_table):
        T = sweep_table.T
        assert len(sweep_table) == 100 and not sweep_table.failures
        assert np.all(np.diff(T) > 0)
        assert sweep_table.sigmas[0] == 0.085 and sweep_table.sigmas[-1] == 2.0


def test_chebyshev_sigmas():
    assert chebyshev_sigmas(0.2, 0.7, 1).tolist() == [0.2]
    s = chebyshev_sigmas(0.085, 2, 100)
    assert s[0] == 0.085 and s[-1] == 2.0 and len(s) == 100


class TestTopPortion:
    def test_initial_point(self, solutions):
        top = top_portion(1.0, solutions(1.0).T)
        assert top.phis[0] == math.pi / 2 and top.phis[-1] == 0.0
        assert top.r[0] == 1.0 and top.u[0] == solutions(1.0).T

    def test_vogel_and_rise(self, solutions):
        T = solutions(1.0).T
        top = top_portion(1.0, T)
        assert vogel_bounds_check(1.0, T, top.r[-1])
        assert top.u[-1] > T

    def test_dense_matches_samples(self, solutions):
        top = top_portion(2.0, solutions(2.0).T)
        mid = len(top.phis) // 2
        assert np.allclose(top(top.phis[mid])[:2], top.y[:2, mid], atol=1e-12)

    def test_rhs_at_vertical(self):
        dr, du = profile_rhs(math.pi / 2, [0.5, 0.8])
        assert dr == pytest.approx(0.0, abs=1e-16)
        assert du == pytest.approx(-0.5 / (0.4 + 1))


class TestShooting:
    def test_classification(self):
        assert classify(1.0, 0.5) == TOO_LOW
        assert classify(1.0, 1.3) == TOO_HIGH

    def test_bracket(self):
        with pytest.raises(InvalidArgumentError):
            shoot_T(1.0, bracket=(1.1, 1.4))

    def test_invalid(self):
        with pytest.raises(InvalidArgumentError):
            shoot_T(-1.0)
