"""Third-order Wronskians and the identities they satisfy for solutions of
``u''' + beta(t) u'' + gamma(t) u' + delta u = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import ArgumentError, WronskianVanishes
from .numkit import Grid, ScalarFunction, as_function, as_grid

__all__ = [
    "det3",
    "wronskian3",
    "wronskian3_deriv",
    "FundamentalSet",
    "SideCondition",
    "WronskianRelation",
    "wronskian_samples",
    "check_derivative_relation",
    "abel_check",
    "compatibility_alpha",
    "NONVANISHING_RTOL",
]

NONVANISHING_RTOL = 1e-12


def det3(r0, r1, r2):
    """Determinant of the 3x3 matrix with rows r0, r1, r2.

    Each row is a length-3 sequence whose entries may be arrays; the result
    broadcasts over them. Shared by the Wronskians and by the torsion
    mixed product.

    The six permutation products are split by sign and each group is summed
    in sorted order, so swapping two columns negates the result exactly.
    """
    a0, a1, a2 = r0
    b0, b1, b2 = r1
    c0, c1, c2 = r2
    plus = np.broadcast_arrays(a0 * b1 * c2, a1 * b2 * c0, a2 * b0 * c1)
    minus = np.broadcast_arrays(a0 * b2 * c1, a1 * b0 * c2, a2 * b1 * c0)
    return _sorted_sum(plus) - _sorted_sum(minus)


def _sorted_sum(terms):
    s = np.sort(np.stack(terms), axis=0)
    return s[0] + s[1] + s[2]


def _rows(fs, t, orders):
    return [[f.deriv(k, t) for f in fs] for k in orders]


def wronskian3(f: ScalarFunction, g: ScalarFunction, h: ScalarFunction, t):
    """W(f, g, h)(t): rows are values, first and second derivatives."""
    return det3(*_rows((f, g, h), t, (0, 1, 2)))


def wronskian3_deriv(f: ScalarFunction, g: ScalarFunction, h: ScalarFunction, t):
    """W(f', g', h')(t): rows are first, second and third derivatives."""
    return det3(*_rows((f, g, h), t, (1, 2, 3)))


@dataclass(frozen=True)
class SideCondition:
    """Coefficients of ``u''' + beta u'' + gamma u' + delta u = 0``.

    ``beta=None`` stands for the zero function, which is the case every
    family of this package lives in.
    """

    gamma: ScalarFunction
    delta: float
    beta: ScalarFunction | None = None

    def __post_init__(self):
        object.__setattr__(self, "gamma", as_function(self.gamma))
        if self.beta is not None:
            object.__setattr__(self, "beta", as_function(self.beta))
        d = float(self.delta)
        if d == 0.0 or not np.isfinite(d):
            raise ArgumentError("side condition needs a finite nonzero delta")
        object.__setattr__(self, "delta", d)

    def beta_at(self, t):
        t = np.asarray(t, dtype=float)
        return 0.0 * t if self.beta is None else self.beta.deriv(0, t)

    def residual(self, u: ScalarFunction, t):
        """Pointwise ``u''' + beta u'' + gamma u' + delta u``."""
        return (
            u.deriv(3, t)
            + self.beta_at(t) * u.deriv(2, t)
            + self.gamma.deriv(0, t) * u.deriv(1, t)
            + self.delta * u.deriv(0, t)
        )


@dataclass(frozen=True)
class FundamentalSet:
    """Ordered triple (x, y, z). Order matters: it fixes the sign of W."""

    x: ScalarFunction
    y: ScalarFunction
    z: ScalarFunction

    @property
    def members(self) -> tuple[ScalarFunction, ScalarFunction, ScalarFunction]:
        return (self.x, self.y, self.z)

    @property
    def domain(self) -> tuple[float, float]:
        lo = max(f.domain[0] for f in self.members)
        hi = min(f.domain[1] for f in self.members)
        return (lo, hi)

    def wronskian(self, t):
        return wronskian3(self.x, self.y, self.z, t)

    def wronskian_deriv(self, t):
        return wronskian3_deriv(self.x, self.y, self.z, t)

    def nonvanishing(self, grid) -> bool:
        """Both W(x,y,z) and W(x',y',z') clear the scaled zero threshold.

        A value counts as nonzero when ``|W| > 1e-12 * (1 + max row norm)``
        at every grid point.
        """
        pts = as_grid(grid).points
        d = np.array([f.derivatives(pts) for f in self.members])  # (3 funcs, 4 orders, n)
        for orders in ((0, 1, 2), (1, 2, 3)):
            rows = [[d[j, k] for j in range(3)] for k in orders]
            w = det3(*rows)
            norm = np.max([np.sqrt(sum(r[j] ** 2 for j in range(3))) for r in rows], axis=0)
            if np.any(np.abs(w) <= NONVANISHING_RTOL * (1.0 + norm)):
                return False
        return True


@dataclass(frozen=True)
class WronskianRelation:
    """An equation ``F(W(x,y,z), W(x',y',z')) = 0`` given by its residual F."""

    residual: Callable[[float, float], float]

    def __call__(self, w_pos, w_der):
        return self.residual(w_pos, w_der)

    def reduced(self, delta: float) -> Callable[[float], float]:
        """G(C0; delta) = F(C0, -delta C0), the constant-Wronskian condition."""
        return lambda c0: self.residual(c0, -delta * c0)

    @classmethod
    def tzitzeica(cls, alpha: float) -> WronskianRelation:
        """``W(x',y',z') - alpha W(x,y,z)^2``."""
        return cls(lambda w, wd: wd - alpha * w * w)


def wronskian_samples(fset: FundamentalSet, grid) -> tuple[np.ndarray, np.ndarray]:
    """(W, W_der) at the grid points, evaluating each derivative once."""
    pts = as_grid(grid).points
    d = [f.derivatives(pts) for f in fset.members]
    w = det3(*[[d[j][k] for j in range(3)] for k in (0, 1, 2)])
    wd = det3(*[[d[j][k] for j in range(3)] for k in (1, 2, 3)])
    return w, wd


def check_derivative_relation(fset: FundamentalSet, sc: SideCondition, grid) -> float:
    """max over the grid of ``|W' + delta W| / (1 + |delta W|)``, W' = W(x',y',z')."""
    w, wd = wronskian_samples(fset, grid)
    dw = sc.delta * w
    return float(np.max(np.abs(wd + dw) / (1.0 + np.abs(dw))))


def abel_check(fset: FundamentalSet, sc: SideCondition, grid) -> float:
    """Residual of ``dW/dt = -beta(t) W`` on interior grid points.

    ``dW/dt`` is a fourth-order central difference of the sampled W; the two
    points at each end are skipped. Normalised by ``1 + |W|``.
    """
    grid = as_grid(grid)
    w, _ = wronskian_samples(fset, grid)
    h = grid.h
    dw = (w[:-4] - 8.0 * w[1:-3] + 8.0 * w[3:-1] - w[4:]) / (12.0 * h)
    inner = w[2:-2]
    beta = np.broadcast_to(sc.beta_at(grid.points[2:-2]), inner.shape)
    return float(np.max(np.abs(dw + beta * inner) / (1.0 + np.abs(inner))))


def compatibility_alpha(w0: float, delta: float) -> float:
    """Curve constant ``-delta / W0`` implied by a constant Wronskian W0."""
    if w0 == 0.0:
        raise WronskianVanishes("Wronskian vanishes; the functions are not linearly independent")
    return -float(delta) / float(w0)
