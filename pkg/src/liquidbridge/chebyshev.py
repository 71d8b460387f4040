"""Chebyshev collocation primitives.

Grids are Chebyshev points of the second kind, stored in ascending order so
that the first node is the left end of the interval. Differentiation and
resampling operators are built from barycentric weights; rectangular
operators map values on an ``n``-point grid to values of the interpolant
(or its derivative) on the ``n - 1``-point grid over the same interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidArgumentError, OutOfDomainError


def _check_interval(interval):
    lo, hi = float(interval[0]), float(interval[1])
    if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
        raise InvalidArgumentError(f"degenerate interval {interval!r}")
    return lo, hi


def cheb_points(n: int, interval=(-1.0, 1.0)) -> np.ndarray:
    """Chebyshev points of the second kind on ``interval``, ascending.

    The sine form of the node formula is used so the points are symmetric
    about the midpoint to rounding, and the endpoints are set exactly.
    """
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"need at least two nodes, got {n!r}")
    n = int(n)
    lo, hi = _check_interval(interval)
    m = n - 1
    x = np.sin(np.pi * np.arange(-m, m + 1, 2) / (2 * m))
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    pts = mid + half * x
    pts[0], pts[-1] = lo, hi
    if n % 2 == 1:
        pts[m // 2] = mid
    return pts


def bary_weights(n: int) -> np.ndarray:
    """Barycentric weights for ``n`` second-kind points (scale-free)."""
    w = np.ones(n)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


@dataclass(frozen=True)
class ChebGrid:
    n: int
    interval: tuple = (-1.0, 1.0)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = _check_interval(self.interval)
        object.__setattr__(self, "interval", (lo, hi))
        object.__setattr__(self, "nodes", cheb_points(self.n, (lo, hi)))
        object.__setattr__(self, "weights", bary_weights(self.n))
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def lo(self):
        return self.interval[0]

    @property
    def hi(self):
        return self.interval[1]


@dataclass(frozen=True)
class DiffOperator:
    rows: int
    cols: int
    order: int
    entries: np.ndarray = field(repr=False)
    interval: tuple = (-1.0, 1.0)

    def __matmul__(self, values):
        return self.entries @ values


def _square_diff(grid: ChebGrid) -> np.ndarray:
    x, w = grid.nodes, grid.weights
    dx = x[:, None] - x[None, :]
    np.fill_diagonal(dx, 1.0)
    d = (w[None, :] / w[:, None]) / dx
    np.fill_diagonal(d, 0.0)
    # negative-sum trick: rows annihilate constants
    np.fill_diagonal(d, -d.sum(axis=1))
    return d


def interp_matrix(grid: ChebGrid, points) -> np.ndarray:
    """Matrix whose product with nodal values gives the interpolant at ``points``."""
    points = np.asarray(points, dtype=float)
    x, w = grid.nodes, grid.weights
    diff = points[:, None] - x[None, :]
    exact = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        c = w[None, :] / diff
        p = c / c.sum(axis=1, keepdims=True)
    hit = exact.any(axis=1)
    p[hit] = exact[hit].astype(float)
    return p


def diff_operator(rows: int, cols: int, order: int, interval=(-1.0, 1.0)) -> DiffOperator:
    """Collocation operator of derivative ``order`` (0 or 1).

    Square shapes give the identity (order 0) or the usual differentiation
    matrix. With ``rows == cols - 1`` the result samples the interpolant, or
    its derivative, on the smaller Chebyshev grid (spectral down-sampling).
    """
    if order not in (0, 1):
        raise InvalidArgumentError(f"order must be 0 or 1, got {order!r}")
    if cols < 2 or rows not in (cols, cols - 1) or rows < 1:
        raise InvalidArgumentError(f"unsupported shape {rows}x{cols}")
    lo, hi = _check_interval(interval)
    # built on [-1, 1] and scaled, so narrow intervals far from the origin
    # do not lose digits in the node differences
    ref = ChebGrid(cols)
    if rows == cols:
        mat = np.eye(cols) if order == 0 else _square_diff(ref)
    else:
        down = interp_matrix(ref, cheb_points(rows)) if rows > 1 else interp_matrix(ref, [0.0])
        mat = down if order == 0 else down @ _square_diff(ref)
    if order == 1:
        mat = mat * (2.0 / (hi - lo))
    return DiffOperator(rows, cols, order, mat, (lo, hi))


def bary_eval(grid: ChebGrid, values, points) -> np.ndarray:
    """Evaluate the interpolant of nodal ``values`` at ``points`` (no extrapolation)."""
    values = np.asarray(values, dtype=float)
    if values.shape != (grid.n,):
        raise InvalidArgumentError(f"expected {grid.n} values, got shape {values.shape}")
    scalar = np.ndim(points) == 0
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    slack = 4 * np.finfo(float).eps * (grid.hi - grid.lo)
    if np.any(pts < grid.lo - slack) or np.any(pts > grid.hi + slack):
        raise OutOfDomainError(f"points outside {grid.interval}")
    out = interp_matrix(grid, np.clip(pts, grid.lo, grid.hi)) @ values
    return out[0] if scalar else out


def cheb_coeffs(values) -> np.ndarray:
    """Chebyshev coefficients of the interpolant through ascending 2nd-kind samples."""
    v = np.asarray(values, dtype=float)[::-1]
    n = v.size
    if n == 1:
        return v.copy()
    ext = np.concatenate([v, v[-2:0:-1]])
    c = np.real(np.fft.fft(ext))[:n] / (n - 1)
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def clenshaw_curtis_weights(n: int, interval=(-1.0, 1.0)) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (ascending) and weights of the ``n``-point Clenshaw-Curtis rule."""
    if n < 2:
        raise InvalidArgumentError("Clenshaw-Curtis needs at least two nodes")
    lo, hi = _check_interval(interval)
    m = n - 1
    theta = np.pi * np.arange(n) / m
    w = np.zeros(n)
    v = np.ones(m - 1)
    inner = slice(1, m)
    if m % 2 == 0:
        w[0] = w[m] = 1.0 / (m * m - 1)
        for k in range(1, m // 2):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
        v -= np.cos(m * theta[inner]) / (m * m - 1)
    else:
        w[0] = w[m] = 1.0 / (m * m)
        for k in range(1, (m - 1) // 2 + 1):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k * k - 1)
    w[inner] = 2 * v / m
    # theta runs 0..pi, i.e. nodes descend; the rule is symmetric so only
    # the node order needs flipping.
    return cheb_points(n, (lo, hi)), w[::-1] * 0.5 * (hi - lo)


def clenshaw_curtis(f, a: float, b: float, n: int = 129) -> float:
    """Integrate the callable ``f`` over ``[a, b]``; ``a > b`` flips the sign."""
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    x, w = clenshaw_curtis_weights(n, (a, b))
    return sign * float(w @ np.asarray(f(x), dtype=float))


def cubic_spline(x, y, queries):
    """Natural cubic spline through ``(x, y)`` evaluated at ``queries``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.size < 4 or y.shape != x.shape:
        raise InvalidArgumentError("need at least four knots with matching values")
    if np.any(np.diff(x) <= 0):
        raise InvalidArgumentError("knots must be strictly increasing")
    q = np.asarray(queries, dtype=float)
    if np.any(q < x[0]) or np.any(q > x[-1]):
        raise OutOfDomainError("spline queries outside the knot range")
    return CubicSpline(x, y, bc_type="natural")(q)
