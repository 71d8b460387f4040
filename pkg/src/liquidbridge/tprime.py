"""T'(sigma) by spectral differentiation of a Chebyshev-sampled table."""

from __future__ import annotations

import numpy as np

from .chebyshev import ChebGrid, bary_eval, clenshaw_curtis, diff_operator
from .errors import GridMismatchError, InvalidArgumentError
from .tables import TTable


def table_grid(table: TTable, tol: float = 1e-12) -> ChebGrid:
    """The Chebyshev grid the table radii sit on, or GridMismatchError."""
    s = table.sigmas
    if s.size < 2:
        raise GridMismatchError("need at least two samples to differentiate")
    grid = ChebGrid(s.size, (s[0], s[-1]))
    if np.max(np.abs(grid.nodes - s)) > tol * max(1.0, abs(s[-1])):
        raise GridMismatchError("table radii are not Chebyshev points on their span")
    return grid


def differentiate_T(table: TTable) -> TTable:
    if table.failures:
        raise InvalidArgumentError(f"{len(table.failures)} rows did not converge")
    grid = table_grid(table)
    D = diff_operator(grid.n, grid.n, 1, grid.interval)
    return table.with_tprime(D @ table.T)


def integrate_Tprime(table: TTable, sigma: float, n: int = 129) -> float:
    """Clenshaw-Curtis integral of the T' interpolant from the left end to ``sigma``."""
    grid = table_grid(table)
    tp = table.Tprime
    return clenshaw_curtis(lambda x: bary_eval(grid, tp, x), grid.lo, sigma, n)
