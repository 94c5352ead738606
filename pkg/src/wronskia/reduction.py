"""Reduction of order for ``u''' + gamma(t) u' + delta u = 0`` from one known
solution.

Pipeline: choose gamma so that the seed ``x0`` is a solution, substitute
``u = x0 * Int w`` to get a second-order equation for ``w``, integrate it
numerically, and assemble ``(x0, x0 Int w1, x0 Int w2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import ArgumentError, DegeneracyError, SingularSeedError
from .numkit import Antiderivative, ClosedForm, Grid, LinearCombination, ScalarFunction, as_grid, rk4_linear2
from .wronskian import FundamentalSet, SideCondition

__all__ = [
    "SeedSolution",
    "power_seed",
    "exp_seed",
    "parse_seed",
    "ReducedODE",
    "gamma_from_seed",
    "gamma_function",
    "reduce",
    "solve_reduced",
    "compose",
    "BasisFit",
    "match_basis",
    "run_pipeline",
    "PipelineResult",
]

MAX_SEED_ORDER = 6


def _singular_tol(t):
    return 1e-10 * (1.0 + np.asarray(t, dtype=float) ** 2)


class _JetFunction(ScalarFunction):
    """ScalarFunction whose derivatives 0..3 come from one jet callable."""

    def __init__(self, jet: Callable, domain, name: str = ""):
        super().__init__(domain, name)
        self._jet = jet

    def _deriv(self, k, t):
        return self._jet(np.asarray(t, dtype=float))[k]


def _quotient_jet(num, den):
    """Derivatives 0..3 of num/den from the derivative lists of num and den."""
    n0, n1, n2, n3 = num
    d0, d1, d2, d3 = den
    q0 = n0 / d0
    q1 = (n1 - q0 * d1) / d0
    q2 = (n2 - 2.0 * q1 * d1 - q0 * d2) / d0
    q3 = (n3 - 3.0 * q2 * d1 - 3.0 * q1 * d2 - q0 * d3) / d0
    return [q0, q1, q2, q3]


@dataclass(frozen=True)
class SeedSolution:
    """A known solution ``x0`` of the side condition, for a fixed ``delta``.

    ``derivative(k, t)`` must be valid for k = 0..6 (coefficients of the
    reduced equation need three extra orders). ``x0`` exposes orders 0..3
    as a ScalarFunction.
    """

    x0: ScalarFunction
    delta: float
    derivative: Callable[[int, np.ndarray], np.ndarray]
    label: str = "seed"

    def __post_init__(self):
        d = float(self.delta)
        if d == 0.0 or not math.isfinite(d):
            raise ArgumentError("seed needs a finite nonzero delta")
        object.__setattr__(self, "delta", d)

    @property
    def domain(self) -> tuple[float, float]:
        return self.x0.domain

    @classmethod
    def from_function(cls, x0: ScalarFunction, delta: float, label: str = "seed") -> SeedSolution:
        """Wrap a plain ScalarFunction; orders 4..6 fall back to central differences of order 3."""

        def derivative(k, t):
            t = np.asarray(t, dtype=float)
            if k <= 3:
                return x0.deriv(k, t)
            h = 1e-3 * (1.0 + np.abs(t))
            f = lambda s: x0.deriv(3, s)  # noqa: E731
            if k == 4:
                return (f(t + h) - f(t - h)) / (2 * h)
            if k == 5:
                return (f(t + h) - 2 * f(t) + f(t - h)) / h**2
            return (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) - f(t - 2 * h)) / (2 * h**3)

        return cls(x0, delta, derivative, label)

    def check(self, grid) -> None:
        """Raise :class:`SingularSeedError` at the first t where x0 or x0' vanishes.

        A value counts as vanishing when it is non-finite, below
        ``1e-10 (1 + t^2)`` in size, or changes sign between neighbouring
        grid points (the crossing is located by linear interpolation).
        """
        pts = as_grid(grid).points
        lo, hi = self.domain
        if pts[0] < lo or pts[-1] > hi:
            raise SingularSeedError(f"{self.label}: grid leaves the seed's domain [{lo:g}, {hi:g}]", float(pts[0]))
        with np.errstate(all="ignore"):
            v0 = np.asarray(self.derivative(0, pts), dtype=float)
            v1 = np.asarray(self.derivative(1, pts), dtype=float)
        first = None
        what = ""
        for vals, label in ((v0, "x0"), (v1, "x0'")):
            bad = ~np.isfinite(vals) | (np.abs(vals) <= _singular_tol(pts))
            idx = np.flatnonzero(bad)
            cand = float(pts[idx[0]]) if idx.size else None
            flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
            if flips.size:
                i = flips[0]
                tc = pts[i] - vals[i] * (pts[i + 1] - pts[i]) / (vals[i + 1] - vals[i])
                cand = float(tc) if cand is None else min(cand, float(tc))
            if cand is not None and (first is None or cand < first):
                first, what = cand, label
        if first is not None:
            raise SingularSeedError(f"{self.label}: {what} vanishes near t = {first:.6g}", first)


def _falling(p: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= p - j
    return out


def power_seed(p: float, delta: float) -> SeedSolution:
    """Seed ``t^p``; defined for t > 0 unless p is a non-negative integer."""
    p = float(p)
    integer = p.is_integer() and p >= 0
    domain = (-math.inf, math.inf) if integer else (0.0, math.inf)

    def derivative(k, t):
        t = np.asarray(t, dtype=float)
        c = _falling(p, k)
        if c == 0.0:
            return np.zeros_like(t)
        return c * np.power(t, p - k)

    x0 = ClosedForm([(lambda t, k=k: derivative(k, t)) for k in range(4)], domain=domain, name=f"t^{p:g}")
    return SeedSolution(x0, delta, derivative, label=f"power:{p:g}")


def exp_seed(v: float, delta: float) -> SeedSolution:
    """Seed ``exp(v t)``."""
    v = float(v)

    def derivative(k, t):
        t = np.asarray(t, dtype=float)
        return v**k * np.exp(v * t)

    x0 = ClosedForm([(lambda t, k=k: derivative(k, t)) for k in range(4)], name=f"exp({v:g} t)")
    return SeedSolution(x0, delta, derivative, label=f"exp:{v:g}")


def parse_seed(text: str, delta: float) -> SeedSolution:
    """Parse ``power:P`` or ``exp:V``."""
    kind, sep, value = text.partition(":")
    if not sep:
        raise ArgumentError(f"seed must look like power:P or exp:V, got {text!r}")
    try:
        number = float(value)
    except ValueError:
        raise ArgumentError(f"seed parameter {value!r} is not a number") from None
    if kind == "power":
        return power_seed(number, delta)
    if kind == "exp":
        return exp_seed(number, delta)
    raise ArgumentError(f"unknown seed kind {kind!r} (expected power or exp)")


# ---------------------------------------------------------------------------
# Step 1: gamma_0
# ---------------------------------------------------------------------------


def _gamma_jet(seed: SeedSolution, t):
    d = seed.delta
    x = [seed.derivative(k, t) for k in range(MAX_SEED_ORDER + 1)]
    num = [-(x[3 + k] + d * x[k]) for k in range(4)]
    den = [x[1 + k] for k in range(4)]
    return _quotient_jet(num, den)


def gamma_from_seed(seed: SeedSolution, t):
    """``-(x0''' + delta x0) / x0'``: the gamma that makes x0 a solution at t."""
    t_arr = np.asarray(t, dtype=float)
    x1 = np.asarray(seed.derivative(1, t_arr), dtype=float)
    bad = np.abs(x1) <= _singular_tol(t_arr)
    if np.any(bad):
        where = float(np.atleast_1d(t_arr)[np.flatnonzero(np.atleast_1d(bad))[0]])
        raise SingularSeedError(f"{seed.label}: x0' vanishes at t = {where:.6g}", where)
    x0 = seed.derivative(0, t_arr)
    x3 = seed.derivative(3, t_arr)
    out = -(x3 + seed.delta * x0) / x1
    return float(out) if t_arr.ndim == 0 else out


def gamma_function(seed: SeedSolution) -> ScalarFunction:
    """gamma_0 as a ScalarFunction (derivatives by the quotient rule)."""
    return _JetFunction(lambda t: _gamma_jet(seed, t), seed.domain, name=f"gamma_0[{seed.label}]")


# ---------------------------------------------------------------------------
# Step 2: reduced second-order equation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedODE:
    """``w'' + p(t) w' + q(t) w = 0`` with p = 3 x0'/x0, q = 3 x0''/x0 + gamma_0."""

    p: ScalarFunction
    q: ScalarFunction
    domain: tuple[float, float]
    seed: SeedSolution | None = None


def reduce(seed: SeedSolution, grid=None) -> ReducedODE:
    """Coefficients of the equation for ``w`` after ``u = x0 * Int w``.

    If ``grid`` is given the seed is screened on it first.
    """
    if grid is not None:
        seed.check(grid)

    def p_jet(t):
        x = [seed.derivative(k, t) for k in range(5)]
        return _quotient_jet([3.0 * x[1 + k] for k in range(4)], x[:4])

    def q_jet(t):
        x = [seed.derivative(k, t) for k in range(6)]
        ratio = _quotient_jet([3.0 * x[2 + k] for k in range(4)], x[:4])
        g = _gamma_jet(seed, t)
        return [a + b for a, b in zip(ratio, g)]

    p = _JetFunction(p_jet, seed.domain, name="p")
    q = _JetFunction(q_jet, seed.domain, name="q")
    return ReducedODE(p, q, seed.domain, seed)


# ---------------------------------------------------------------------------
# Step 3: two independent solutions of the reduced equation
# ---------------------------------------------------------------------------


def solve_reduced(red: ReducedODE, grid) -> tuple[ScalarFunction, ScalarFunction]:
    """Solutions with initial data (1, 0) and (0, 1) at ``grid.t0``.

    Raises :class:`DegeneracyError` if their Wronskian ``w1 w2' - w2 w1'``
    becomes numerically zero anywhere on the grid.
    """
    grid = as_grid(grid)
    lo, hi = red.domain
    if grid.t0 < lo or grid.t1 > hi:
        raise ArgumentError(f"grid [{grid.t0:g}, {grid.t1:g}] leaves the reduced equation's domain")
    w1 = rk4_linear2(red.p, red.q, (1.0, 0.0), grid)
    w2 = rk4_linear2(red.p, red.q, (0.0, 1.0), grid)
    a, ap = w1.nodal(0), w1.nodal(1)
    b, bp = w2.nodal(0), w2.nodal(1)
    pair = a * bp - b * ap
    scale = 1e-12 * (1.0 + np.hypot(a, b) * np.hypot(ap, bp))
    if not np.all(np.isfinite(pair)) or np.any(np.abs(pair) <= scale):
        raise DegeneracyError("reduced solutions became linearly dependent on the grid")
    return w1, w2


# ---------------------------------------------------------------------------
# Step 4: compose
# ---------------------------------------------------------------------------


class _Composed(ScalarFunction):
    """``x0 * Int w`` with lower limit at the grid start.

    Orders 0..2 by the product rule; the third derivative comes from the
    side condition itself.
    """

    def __init__(self, seed: SeedSolution, w: ScalarFunction, grid: Grid, gamma: ScalarFunction, name: str):
        super().__init__((grid.t0, grid.t1), name)
        self.seed = seed
        self.w = w
        self.integral = Antiderivative(w, grid)
        self.gamma = gamma

    def _deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        x = [self.seed.derivative(j, t) for j in range(3)]
        big = self.integral.deriv(0, t)
        if k == 0:
            return x[0] * big
        w0 = self.w.deriv(0, t)
        d1 = x[1] * big + x[0] * w0
        if k == 1:
            return d1
        if k == 2:
            return x[2] * big + 2.0 * x[1] * w0 + x[0] * self.w.deriv(1, t)
        return -self.gamma.deriv(0, t) * d1 - self.seed.delta * x[0] * big


def compose(seed: SeedSolution, w1: ScalarFunction, w2: ScalarFunction, grid) -> FundamentalSet:
    """``(x0, x0 Int w1, x0 Int w2)``, integrals taken from ``grid.t0``."""
    grid = as_grid(grid)
    gamma = gamma_function(seed)
    y = _Composed(seed, w1, grid, gamma, name="x0*Int(w1)")
    z = _Composed(seed, w2, grid, gamma, name="x0*Int(w2)")
    return FundamentalSet(seed.x0, y, z)


# ---------------------------------------------------------------------------
# Change of basis against a reference set
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasisFit:
    """Least-squares coefficients expressing a reference set in a computed one.

    ``matrix[:, j]`` holds the coefficients of reference member j in the
    computed members; ``rebased`` is the computed set recombined that way.
    """

    matrix: np.ndarray
    residual: float
    condition: float
    rebased: FundamentalSet


def match_basis(fset: FundamentalSet, reference: FundamentalSet, grid) -> BasisFit:
    """Fit ``reference ~ fset @ M`` on the grid nodes.

    ``residual`` is the worst relative misfit over the three reference
    members, each measured against that member's max magnitude.
    """
    pts = as_grid(grid).points
    A = np.column_stack([f.deriv(0, pts) for f in fset.members])
    B = np.column_stack([f.deriv(0, pts) for f in reference.members])
    scale = np.max(np.abs(A), axis=0)
    scale[scale == 0] = 1.0
    coef, *_ = np.linalg.lstsq(A / scale, B, rcond=None)
    M = coef / scale[:, None]
    fit = A @ M
    misfit = np.max(np.abs(fit - B), axis=0) / np.maximum(np.max(np.abs(B), axis=0), 1e-300)
    cond = float(np.linalg.cond(A / scale))
    members = [LinearCombination(fset.members, M[:, j], name=f"rebased[{j}]") for j in range(3)]
    return BasisFit(M, float(np.max(misfit)), cond, FundamentalSet(*members))


# ---------------------------------------------------------------------------
# Whole pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    seed: SeedSolution
    side_condition: SideCondition
    reduced: ReducedODE
    w: tuple[ScalarFunction, ScalarFunction]
    fundamental_set: FundamentalSet
    grid: Grid


def run_pipeline(seed: SeedSolution, grid) -> PipelineResult:
    """Screen the seed, then reduce, solve and compose on ``grid``."""
    grid = as_grid(grid)
    seed.check(grid)
    red = reduce(seed)
    w1, w2 = solve_reduced(red, grid)
    fset = compose(seed, w1, w2, grid)
    sc = SideCondition(gamma=gamma_function(seed), delta=seed.delta)
    return PipelineResult(seed, sc, red, (w1, w2), fset, grid)
