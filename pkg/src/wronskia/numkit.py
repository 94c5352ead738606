"""Foundational numerics: grids, scalar functions with derivatives, finite
differences, cumulative quadrature, fixed-step RK4 for linear ODEs and the
Airy pair Ai/Bi.

Every object here is immutable after construction and all functions are
pure, so values may be shared freely between threads.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import ArgumentError, DomainError

__all__ = [
    "Grid",
    "as_grid",
    "ScalarFunction",
    "ClosedForm",
    "constant",
    "as_function",
    "LinearCombination",
    "GridSolution",
    "Antiderivative",
    "central_derivative",
    "finite_difference_columns",
    "integrate_cumulative",
    "rk4_linear3",
    "rk4_linear2",
    "AiryValue",
    "airy",
    "airy_series",
    "airy_arrays",
    "AIRY_MAX_ABS_X",
]

MIN_GRID_POINTS = 5
_UNIFORM_RTOL = 1e-9


# ---------------------------------------------------------------------------
# Grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Uniform grid on ``[t0, t1]`` with ``n`` points, endpoints included."""

    t0: float
    t1: float
    n: int = 2001
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < MIN_GRID_POINTS:
            raise ArgumentError(f"grid needs an integer n >= {MIN_GRID_POINTS}, got {self.n}")
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)) or self.t1 <= self.t0:
            raise ArgumentError(f"grid needs finite t0 < t1, got [{self.t0}, {self.t1}]")
        object.__setattr__(self, "n", int(self.n))
        pts = np.linspace(float(self.t0), float(self.t1), self.n)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / (self.n - 1)

    def __len__(self) -> int:
        return self.n

    def refined(self) -> Grid:
        """Same interval with the step halved."""
        return Grid(self.t0, self.t1, 2 * self.n - 1)


def as_grid(obj) -> Grid:
    """Coerce a :class:`Grid` or a 1-D array of uniformly spaced points."""
    if isinstance(obj, Grid):
        return obj
    pts = np.asarray(obj, dtype=float)
    if pts.ndim != 1 or pts.size < MIN_GRID_POINTS:
        raise ArgumentError(f"grid needs a 1-D array of at least {MIN_GRID_POINTS} points")
    steps = np.diff(pts)
    h = (pts[-1] - pts[0]) / (pts.size - 1)
    if h <= 0 or np.any(np.abs(steps - h) > _UNIFORM_RTOL * abs(h) + 1e-15):
        raise ArgumentError("grid is not uniform and strictly increasing")
    return Grid(float(pts[0]), float(pts[-1]), int(pts.size))


# ---------------------------------------------------------------------------
# Scalar functions
# ---------------------------------------------------------------------------


class ScalarFunction:
    """A real function of ``t`` with derivatives up to order 3.

    Subclasses implement :meth:`_deriv`; arguments may be floats or numpy
    arrays and results follow numpy broadcasting.
    """

    max_order = 3

    def __init__(self, domain: tuple[float, float] = (-math.inf, math.inf), name: str = ""):
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise ArgumentError(f"empty domain ({lo}, {hi})")
        self.domain = (lo, hi)
        self.name = name

    def __repr__(self):
        label = self.name or type(self).__name__
        return f"<{label} on [{self.domain[0]}, {self.domain[1]}]>"

    def __call__(self, t):
        return self.deriv(0, t)

    def eval(self, t):
        return self.deriv(0, t)

    def deriv(self, k: int, t):
        if k not in range(self.max_order + 1):
            raise ArgumentError(f"derivative order must be in 0..{self.max_order}, got {k}")
        self._check_domain(t)
        return self._deriv(k, t)

    def _check_domain(self, t, slack: float = 0.0):
        arr = np.asarray(t, dtype=float)
        lo, hi = self.domain
        tol = slack + 1e-12 * max(1.0, abs(lo) if math.isfinite(lo) else 0.0, abs(hi) if math.isfinite(hi) else 0.0)
        if arr.size and (np.min(arr) < lo - tol or np.max(arr) > hi + tol or np.any(np.isnan(arr))):
            raise DomainError(f"{self!r} evaluated outside its domain")

    def _deriv(self, k: int, t):
        raise NotImplementedError

    def derivatives(self, t) -> np.ndarray:
        """Stack of ``deriv(k, t)`` for k = 0..3, shape ``(4, len(t))``."""
        t = np.asarray(t, dtype=float)
        return np.array([np.broadcast_to(self.deriv(k, t), t.shape) for k in range(4)], dtype=float)


class ClosedForm(ScalarFunction):
    """Function given by explicit formulas for its value and derivatives.

    Parameters
    ----------
    derivs : sequence of callables
        ``derivs[k](t)`` returns the k-th derivative, k = 0..3.
    """

    def __init__(self, derivs: Sequence[Callable], domain=(-math.inf, math.inf), name: str = ""):
        super().__init__(domain, name)
        if len(derivs) != 4:
            raise ArgumentError("closed forms need formulas for derivatives 0..3")
        self._fns = tuple(derivs)

    def _deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        out = np.broadcast_to(np.asarray(self._fns[k](t), dtype=float), t.shape)
        return float(out) if t.ndim == 0 else out.copy()


def constant(c: float, name: str = "") -> ClosedForm:
    c = float(c)
    zero = lambda t: 0.0 * t  # noqa: E731
    return ClosedForm([lambda t: c + 0.0 * t, zero, zero, zero], name=name or f"const({c:g})")


def as_function(obj) -> ScalarFunction:
    """Accept a :class:`ScalarFunction`, a number, or ``None`` (meaning 0)."""
    if isinstance(obj, ScalarFunction):
        return obj
    if obj is None:
        return constant(0.0)
    if isinstance(obj, (int, float, np.floating, np.integer)):
        return constant(float(obj))
    raise ArgumentError(f"cannot interpret {obj!r} as a scalar function")


class LinearCombination(ScalarFunction):
    """``sum(c_i * f_i)`` with derivatives combined term by term."""

    def __init__(self, funcs: Sequence[ScalarFunction], coeffs: Sequence[float], name: str = ""):
        if len(funcs) != len(coeffs) or not funcs:
            raise ArgumentError("need matching non-empty lists of functions and coefficients")
        lo = max(f.domain[0] for f in funcs)
        hi = min(f.domain[1] for f in funcs)
        super().__init__((lo, hi), name)
        self.funcs = tuple(funcs)
        self.coeffs = tuple(float(c) for c in coeffs)

    def _deriv(self, k, t):
        total = 0.0
        for c, f in zip(self.coeffs, self.funcs):
            if c != 0.0:
                total = total + c * f.deriv(k, t)
        return total + 0.0 * np.asarray(t, dtype=float)


def _hermite(grid: Grid, values: np.ndarray, slopes: np.ndarray, t):
    """Cubic Hermite interpolation of nodal values/slopes on a uniform grid."""
    t = np.asarray(t, dtype=float)
    h = grid.h
    i = np.clip(np.floor((t - grid.t0) / h).astype(int), 0, grid.n - 2)
    s = (t - grid.points[i]) / h
    s2 = s * s
    s3 = s2 * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = s3 - 2 * s2 + s
    h01 = -2 * s3 + 3 * s2
    h11 = s3 - s2
    return h00 * values[i] + h * h10 * slopes[i] + h01 * values[i + 1] + h * h11 * slopes[i + 1]


class GridSolution(ScalarFunction):
    """Numerical ODE solution stored on a grid.

    ``levels[j]`` holds the j-th derivative at the nodes, j = 0..m where m is
    the ODE order (the top level comes from the ODE itself). Orders below m
    are interpolated by cubic Hermite using the next level as slope; orders
    m..3 are computed by ``closure(k, t, lower)`` from the lower derivatives,
    so they satisfy the equation algebraically.
    """

    def __init__(self, grid: Grid, levels: Sequence[np.ndarray], closure: Callable, name: str = ""):
        super().__init__((grid.t0, grid.t1), name)
        self.grid = grid
        self.levels = tuple(np.asarray(v, dtype=float) for v in levels)
        self.order = len(self.levels) - 1
        self._closure = closure

    def nodal(self, k: int) -> np.ndarray:
        """Stored k-th derivative at the grid nodes (k <= ODE order)."""
        return self.levels[k]

    def _deriv(self, k, t):
        if k < self.order:
            return _hermite(self.grid, self.levels[k], self.levels[k + 1], t)
        lower = [self._deriv(j, t) for j in range(k)]
        return self._closure(k, t, lower)


class Antiderivative(ScalarFunction):
    """``F(t) = integral of f from grid.t0 to t``.

    Nodal values come from :func:`integrate_cumulative`; between nodes ``F`` is
    Hermite-interpolated with the exact slope ``f``. Derivatives of order
    k >= 1 are ``f.deriv(k - 1)``.
    """

    max_order = 3

    def __init__(self, f: ScalarFunction, grid: Grid, name: str = ""):
        super().__init__((grid.t0, grid.t1), name or f"int({f.name})")
        self.f = f
        self.grid = grid
        self._slopes = np.asarray(f.deriv(0, grid.points), dtype=float)
        self._values = np.asarray(integrate_cumulative(self._slopes, grid))

    def _deriv(self, k, t):
        if k == 0:
            return _hermite(self.grid, self._values, self._slopes, t)
        return self.f.deriv(k - 1, t)


# ---------------------------------------------------------------------------
# Finite differences and quadrature
# ---------------------------------------------------------------------------


def central_derivative(f: ScalarFunction, k: int, t: float, h: float) -> float:
    """O(h^2) central-difference estimate of the k-th derivative (k = 1..3)."""
    if h <= 0:
        raise ArgumentError("step h must be positive")
    if k not in (1, 2, 3):
        raise ArgumentError(f"derivative order must be 1, 2 or 3, got {k}")
    lo, hi = f.domain
    if t - 2 * h < lo or t + 2 * h > hi:
        raise DomainError(f"stencil [{t - 2 * h}, {t + 2 * h}] leaves domain {f.domain}")
    if k == 1:
        return float((f.eval(t + h) - f.eval(t - h)) / (2 * h))
    if k == 2:
        return float((f.eval(t + h) - 2 * f.eval(t) + f.eval(t - h)) / (h * h))
    return float((f.eval(t + 2 * h) - 2 * f.eval(t + h) + 2 * f.eval(t - h) - f.eval(t - 2 * h)) / (2 * h**3))


# one-sided O(h^2) stencils, offsets 0..len-1, used at the two ends of a sample array
_FORWARD = {
    1: np.array([-3.0, 4.0, -1.0]) / 2.0,
    2: np.array([2.0, -5.0, 4.0, -1.0]),
    3: np.array([-5.0, 18.0, -24.0, 14.0, -3.0]) / 2.0,
}
_CENTRAL = {
    1: (np.array([-1.0, 0.0, 1.0]) / 2.0, 1),
    2: (np.array([1.0, -2.0, 1.0]), 1),
    3: (np.array([-1.0, 2.0, 0.0, -2.0, 1.0]) / 2.0, 2),
}


def finite_difference_columns(values, h: float, k: int) -> np.ndarray:
    """k-th derivative (k = 1..3) of uniformly sampled data, O(h^2) everywhere.

    Central stencils in the interior, one-sided stencils at the ends. Needs
    at least 5 samples.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < MIN_GRID_POINTS:
        raise ArgumentError(f"need at least {MIN_GRID_POINTS} samples")
    if k not in _CENTRAL:
        raise ArgumentError(f"derivative order must be 1, 2 or 3, got {k}")
    weights, half = _CENTRAL[k]
    out = np.empty_like(v)
    n = v.size
    interior = np.zeros(n - 2 * half)
    for j, w in enumerate(weights):
        interior += w * v[j : n - 2 * half + j]
    out[half : n - half] = interior
    fw = _FORWARD[k]
    m = fw.size
    for i in range(half):
        out[i] = fw @ v[i : i + m]
        # mirror image of the forward stencil for the right end
        out[n - 1 - i] = (-1) ** k * (fw @ v[n - 1 - i - np.arange(m)])
    return out / h**k


def integrate_cumulative(f, grid) -> np.ndarray:
    """Cumulative integral from ``grid.t0`` by composite Simpson.

    Even nodes use the Simpson rule over node pairs; an odd node ``i`` adds
    the 3-point closing rule over ``[t_{i-1}, t_i]``. Exact for quadratics.

    Parameters
    ----------
    f : ScalarFunction or array_like
        Function, or its values at the grid points.
    grid : Grid or array_like
    """
    grid = as_grid(grid)
    if isinstance(f, ScalarFunction):
        fv = np.asarray(f.deriv(0, grid.points), dtype=float)
    else:
        fv = np.asarray(f, dtype=float)
    if fv.shape != (grid.n,):
        raise ArgumentError("sample count does not match grid")
    h = grid.h
    n = grid.n
    F = np.zeros(n)
    pair = h / 3.0 * (fv[0:-2:2] + 4.0 * fv[1:-1:2] + fv[2::2])
    F[2::2] = np.cumsum(pair)
    # odd nodes: left piece of the 3-point rule anchored at the previous even node
    odd = np.arange(1, n, 2)
    has_right = odd + 1 < n
    o = odd[has_right]
    F[o] = F[o - 1] + h / 12.0 * (5.0 * fv[o - 1] + 8.0 * fv[o] - fv[o + 1])
    if odd.size and not has_right[-1]:
        i = odd[-1]
        F[i] = F[i - 1] + h / 12.0 * (-fv[i - 2] + 8.0 * fv[i - 1] + 5.0 * fv[i])
    return F


# ---------------------------------------------------------------------------
# Fixed-step RK4
# ---------------------------------------------------------------------------


def _coefficient_samples(func: ScalarFunction, grid: Grid):
    """Coefficient at the nodes and at the midpoints."""
    mid = grid.points[:-1] + 0.5 * grid.h
    return (
        np.broadcast_to(np.asarray(func.deriv(0, grid.points), dtype=float), (grid.n,)),
        np.broadcast_to(np.asarray(func.deriv(0, mid), dtype=float), (grid.n - 1,)),
    )


def _rk4_companion(coeffs_node, coeffs_mid, y0, grid: Grid) -> np.ndarray:
    """Classical RK4 for ``y^(m) = -sum_j a_j(t) y^(j)`` in companion form.

    ``coeffs_node[j]`` / ``coeffs_mid[j]`` sample ``a_j`` (coefficient of the
    j-th derivative) at nodes / midpoints. Returns states of shape (m, n).
    """
    m = len(y0)
    n = grid.n
    h = grid.h
    Y = np.empty((m, n))
    Y[:, 0] = y0
    a_node = [np.asarray(c, dtype=float).tolist() for c in coeffs_node]
    a_mid = [np.asarray(c, dtype=float).tolist() for c in coeffs_mid]
    y = [float(v) for v in y0]

    def rhs(state, a):
        top = 0.0
        for j in range(m):
            top -= a[j] * state[j]
        return state[1:] + [top]

    for i in range(n - 1):
        an = [c[i] for c in a_node]
        am = [c[i] for c in a_mid]
        an1 = [c[i + 1] for c in a_node]
        k1 = rhs(y, an)
        k2 = rhs([y[j] + 0.5 * h * k1[j] for j in range(m)], am)
        k3 = rhs([y[j] + 0.5 * h * k2[j] for j in range(m)], am)
        k4 = rhs([y[j] + h * k3[j] for j in range(m)], an1)
        y = [y[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) for j in range(m)]
        Y[:, i + 1] = y
    return Y


def rk4_linear3(beta, gamma, delta: float, ics: Sequence[float], grid) -> GridSolution:
    """Integrate ``u''' + beta(t) u'' + gamma(t) u' + delta u = 0`` by RK4.

    Parameters
    ----------
    beta, gamma : ScalarFunction, number or None
        Coefficient functions (``None`` means identically zero).
    delta : float
    ics : (u, u', u'') at ``grid.t0``
    grid : Grid or uniform array of points

    Returns
    -------
    GridSolution
        ``deriv(3, t)`` is recovered from the equation, not differenced.
    """
    grid = as_grid(grid)
    if len(ics) != 3:
        raise ArgumentError("third-order problem needs (u, u', u'') initial values")
    beta = as_function(beta)
    gamma = as_function(gamma)
    delta = float(delta)
    b_n, b_m = _coefficient_samples(beta, grid)
    g_n, g_m = _coefficient_samples(gamma, grid)
    d_n = np.full(grid.n, delta)
    d_m = np.full(grid.n - 1, delta)
    Y = _rk4_companion([d_n, g_n, b_n], [d_m, g_m, b_m], ics, grid)
    top = -(b_n * Y[2] + g_n * Y[1] + delta * Y[0])

    def closure(k, t, lower):
        # only k == 3 reaches here
        return -(beta.deriv(0, t) * lower[2] + gamma.deriv(0, t) * lower[1] + delta * lower[0])

    return GridSolution(grid, [Y[0], Y[1], Y[2], top], closure, name="rk4_linear3")


def rk4_linear2(p, q, ics: Sequence[float], grid) -> GridSolution:
    """Integrate ``w'' + p(t) w' + q(t) w = 0`` by RK4.

    ``deriv(2)`` and ``deriv(3)`` come from the equation and its derivative,
    using ``p'`` and ``q'`` from the coefficient functions.
    """
    grid = as_grid(grid)
    if len(ics) != 2:
        raise ArgumentError("second-order problem needs (w, w') initial values")
    p = as_function(p)
    q = as_function(q)
    p_n, p_m = _coefficient_samples(p, grid)
    q_n, q_m = _coefficient_samples(q, grid)
    Y = _rk4_companion([q_n, p_n], [q_m, p_m], ics, grid)
    top = -(p_n * Y[1] + q_n * Y[0])

    def closure(k, t, lower):
        w, w1 = lower[0], lower[1]
        if k == 2:
            return -(p.deriv(0, t) * w1 + q.deriv(0, t) * w)
        w2 = lower[2]
        return -(p.deriv(1, t) * w1 + p.deriv(0, t) * w2 + q.deriv(1, t) * w + q.deriv(0, t) * w1)

    return GridSolution(grid, [Y[0], Y[1], top], closure, name="rk4_linear2")


# ---------------------------------------------------------------------------
# Airy functions
# ---------------------------------------------------------------------------

AIRY_MAX_ABS_X = 12.0
_SERIES_LIMIT = 6.0
# above this point Ai is taken from the backward continuation (series cancels)
_AI_SERIES_POS_LIMIT = 2.0
_AI_BACKWARD_START = 15.0
_TABLE_STEP = 1.0 / 32.0
_FINE_STEP = 1.0 / 1024.0

_AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
_AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
_SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class AiryValue:
    ai: float
    bi: float
    ai_prime: float
    bi_prime: float

    @property
    def wronskian(self) -> float:
        """``Ai Bi' - Ai' Bi``; equals 1/pi exactly in exact arithmetic."""
        return self.ai * self.bi_prime - self.ai_prime * self.bi


def _maclaurin_pair(x: np.ndarray, start: int) -> tuple[np.ndarray, np.ndarray]:
    """Value and derivative of sum c_j x^j over j = start (mod 3).

    Coefficients follow the Airy recurrence ``c_{j+3} = c_j / ((j+2)(j+3))``
    with ``c_start = 1``. Terms are accumulated with Neumaier compensation
    until every term falls below 1e-17 of its running sum.
    """
    x = np.asarray(x, dtype=float)
    x3 = x**3
    term = x**start
    dterm = np.zeros_like(x) if start == 0 else np.ones_like(x)
    s = np.zeros_like(x)
    cs = np.zeros_like(x)
    d = np.zeros_like(x)
    cd = np.zeros_like(x)

    def add(total, comp, value):
        t = total + value
        comp = comp + np.where(np.abs(total) >= np.abs(value), (total - t) + value, (value - t) + total)
        return t, comp

    j = start
    while True:
        s, cs = add(s, cs, term)
        d, cd = add(d, cd, dterm)
        if j > 6:
            small_v = np.abs(term) <= 1e-17 * np.abs(s + cs)
            small_d = np.abs(dterm) <= 1e-17 * np.abs(d + cd)
            if np.all(small_v & small_d) or j > 600:
                break
        # d/dx of c_{j+3} x^{j+3} equals c_j x^j * x^2 / (j+2)
        dterm = term * x * x / (j + 2)
        term = term * x3 / ((j + 2) * (j + 3))
        j += 3
    return s + cs, d + cd


def _series_arrays(x: np.ndarray):
    f, fp = _maclaurin_pair(x, 0)
    g, gp = _maclaurin_pair(x, 1)
    c1, c2 = _AI0, -_AIP0
    return (c1 * f - c2 * g, _SQRT3 * (c1 * f + c2 * g), c1 * fp - c2 * gp, _SQRT3 * (c1 * fp + c2 * gp))


def airy_series(x: float) -> AiryValue:
    """Ai, Bi and their derivatives from the Maclaurin series about 0.

    Accurate for moderate ``|x|``; for large positive ``x`` the Ai value
    suffers cancellation between the two power series.
    """
    ai, bi, aip, bip = (float(v[0]) for v in _series_arrays(np.array([float(x)])))
    return AiryValue(ai, bi, aip, bip)


def _airy_step(x: float, y: float, yp: float, h: float) -> tuple[float, float]:
    """One RK4 step of ``y'' = x y``."""
    k1y, k1p = yp, x * y
    xm = x + 0.5 * h
    k2y, k2p = yp + 0.5 * h * k1p, xm * (y + 0.5 * h * k1y)
    k3y, k3p = yp + 0.5 * h * k2p, xm * (y + 0.5 * h * k2y)
    k4y, k4p = yp + h * k3p, (x + h) * (y + h * k3y)
    return (
        y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y),
        yp + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p),
    )


def _airy_march(x0: float, y: float, yp: float, x_end: float) -> tuple[float, float]:
    """March ``y'' = x y`` from x0 to x_end in steps no longer than the fine step."""
    span = x_end - x0
    if span == 0.0:
        return y, yp
    m = max(1, int(math.ceil(abs(span) / _FINE_STEP - 1e-9)))
    h = span / m
    x = x0
    for i in range(m):
        y, yp = _airy_step(x, y, yp, h)
        x = x0 + (i + 1) * h
    return y, yp


@functools.lru_cache(maxsize=None)
def _continuation_table(kind: str) -> tuple[float, float, np.ndarray, np.ndarray]:
    """Nodes (start, step, y, y') for one RK4 continuation branch.

    ``neg``: Ai and Bi stacked, marched from -6 down to -12 (oscillatory, stable).
    ``bi_pos``: Bi marched from +6 up to +12 (growing solution, stable).
    ``ai_pos``: Ai marched backwards from 15 down to the series limit; the
    backward march is dominated by Ai whatever the start, and the result is
    scaled to the series value at the limit.
    """
    H = _TABLE_STEP
    if kind == "neg":
        start = airy_series(-_SERIES_LIMIT)
        nodes = int(round((AIRY_MAX_ABS_X - _SERIES_LIMIT) / H)) + 1
        ys = np.empty((2, nodes))
        yps = np.empty((2, nodes))
        for col, (y, yp) in enumerate([(start.ai, start.ai_prime), (start.bi, start.bi_prime)]):
            ys[col, 0], yps[col, 0] = y, yp
            for i in range(1, nodes):
                x_prev = -_SERIES_LIMIT - (i - 1) * H
                y, yp = _airy_march(x_prev, y, yp, x_prev - H)
                ys[col, i], yps[col, i] = y, yp
        return (-_SERIES_LIMIT, -H, ys, yps)
    if kind == "bi_pos":
        start = airy_series(_SERIES_LIMIT)
        nodes = int(round((AIRY_MAX_ABS_X - _SERIES_LIMIT) / H)) + 1
        ys = np.empty(nodes)
        yps = np.empty(nodes)
        y, yp = start.bi, start.bi_prime
        ys[0], yps[0] = y, yp
        for i in range(1, nodes):
            x_prev = _SERIES_LIMIT + (i - 1) * H
            y, yp = _airy_march(x_prev, y, yp, x_prev + H)
            ys[i], yps[i] = y, yp
        return (_SERIES_LIMIT, H, ys, yps)
    if kind == "ai_pos":
        nodes = int(round((_AI_BACKWARD_START - _AI_SERIES_POS_LIMIT) / H)) + 1
        ys = np.empty(nodes)
        yps = np.empty(nodes)
        # start on the decaying branch's slope ratio; Bi contamination dies off anyway
        y, yp = 1e-200, -math.sqrt(_AI_BACKWARD_START) * 1e-200
        ys[-1], yps[-1] = y, yp
        for i in range(nodes - 2, -1, -1):
            x_prev = _AI_SERIES_POS_LIMIT + (i + 1) * H
            y, yp = _airy_march(x_prev, y, yp, x_prev - H)
            ys[i], yps[i] = y, yp
        anchor = airy_series(_AI_SERIES_POS_LIMIT).ai
        scale = anchor / ys[0]
        return (_AI_SERIES_POS_LIMIT, H, ys * scale, yps * scale)
    raise ArgumentError(kind)


def _table_lookup(kind: str, x: float, column: int | None = None) -> tuple[float, float]:
    start, step, ys, yps = _continuation_table(kind)
    if column is not None:
        ys, yps = ys[column], yps[column]
    i = int(round((x - start) / step))
    i = min(max(i, 0), ys.size - 1)
    xi = start + i * step
    return _airy_march(xi, float(ys[i]), float(yps[i]), x)


def airy_arrays(x) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Airy functions Ai, Bi and derivatives for ``|x| <= 12``, elementwise.

    The Maclaurin series is used on ``[-6, 6]``, except Ai for ``x > 2``
    where the series cancels badly; everywhere else values come from RK4
    continuation of ``y'' = x y`` from series-anchored starting data.

    Returns
    -------
    (ai, bi, ai', bi') : arrays shaped like ``x`` (floats for scalar input)
    """
    xa = np.asarray(x, dtype=float)
    flat = xa.ravel()
    if flat.size and (not np.all(np.isfinite(flat)) or np.max(np.abs(flat)) > AIRY_MAX_ABS_X):
        raise DomainError(f"airy supports |x| <= {AIRY_MAX_ABS_X}")
    out = np.empty((4, flat.size))
    series = np.abs(flat) <= _SERIES_LIMIT
    if np.any(series):
        out[:, series] = np.array(_series_arrays(flat[series]))
    for i in np.flatnonzero(flat < -_SERIES_LIMIT):
        out[0, i], out[2, i] = _table_lookup("neg", flat[i], 0)
        out[1, i], out[3, i] = _table_lookup("neg", flat[i], 1)
    for i in np.flatnonzero(flat > _AI_SERIES_POS_LIMIT):
        out[0, i], out[2, i] = _table_lookup("ai_pos", flat[i])
    for i in np.flatnonzero(flat > _SERIES_LIMIT):
        out[1, i], out[3, i] = _table_lookup("bi_pos", flat[i])
    if xa.ndim == 0:
        return tuple(float(col[0]) for col in out)
    return tuple(col.reshape(xa.shape) for col in out)


def airy(x: float) -> AiryValue:
    """Scalar front end to :func:`airy_arrays`."""
    x = float(x)
    if not math.isfinite(x) or abs(x) > AIRY_MAX_ABS_X:
        raise DomainError(f"airy supports |x| <= {AIRY_MAX_ABS_X}, got {x}")
    ai, bi, aip, bip = airy_arrays(x)
    return AiryValue(ai, bi, aip, bip)
