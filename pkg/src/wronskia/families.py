"""Closed-form fundamental sets of ``u''' + gamma(t) u' + delta u = 0``.

Families covered: ``gamma = 0`` (exponential/trigonometric), constant
``gamma`` split by the depressed-cubic discriminant, ``gamma = delta t``
(Airy), and the inverse-power seed curve produced by reduction of order.
Each builder returns the ordered triple, its side condition and the
closed-form value of its (constant) Wronskian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import ArgumentError
from .numkit import AIRY_MAX_ABS_X, Antiderivative, ClosedForm, Grid, ScalarFunction, airy_arrays, constant
from .wronskian import FundamentalSet, SideCondition

__all__ = [
    "real_cbrt",
    "CubicClassification",
    "classify_cubic",
    "ExpTrig",
    "CubicDistinct",
    "CubicRepeated",
    "CubicComplex",
    "Airy",
    "PowerSeedCurve",
    "FamilySpec",
    "build_family",
    "family_from_cubic",
    "AIRY_DEFAULT_GRID",
]

THREE_DISTINCT_REAL = "three_distinct_real"
REPEATED_REAL = "repeated_real"
ONE_REAL_COMPLEX_PAIR = "one_real_complex_pair"

_EXCLUSION_TOL = 1e-9


def real_cbrt(x: float) -> float:
    """Real cube root, negative for negative input."""
    return float(np.cbrt(float(x)))


# ---------------------------------------------------------------------------
# Depressed cubic v^3 + g v + d = 0
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CubicClassification:
    """Root structure of ``v^3 + gamma_tilde v + delta = 0``.

    ``roots`` holds three real roots in ascending order, or ``(m, n, v3)``
    for the complex case, where ``m +/- i n`` (``n > 0``) is the conjugate
    pair and ``v3`` the real root.
    """

    gamma_tilde: float
    delta: float
    D: float
    kind: str
    roots: tuple[float, float, float]

    @property
    def real_roots(self) -> tuple[float, ...]:
        if self.kind == ONE_REAL_COMPLEX_PAIR:
            return (self.roots[2],)
        return self.roots

    def complex_roots(self) -> tuple[complex, complex, complex]:
        if self.kind == ONE_REAL_COMPLEX_PAIR:
            m, n, v3 = self.roots
            return (complex(m, n), complex(m, -n), complex(v3, 0.0))
        return tuple(complex(v, 0.0) for v in self.roots)


def _newton(v: float, p: float, q: float) -> float:
    fp = 3.0 * v * v + p
    if fp == 0.0:
        return v
    return v - (v**3 + p * v + q) / fp


def classify_cubic(gamma_tilde: float, delta: float) -> CubicClassification:
    """Discriminant, root structure and roots of the depressed cubic.

    ``D = -4 gamma_tilde^3 - 27 delta^2``; ``|D| < 1e-10 (1 + g^2 + d^2)`` counts
    as zero. Roots come from the trigonometric form (D > 0) or Cardano's
    formula (D < 0), each polished by one Newton step.
    """
    p = float(gamma_tilde)
    q = float(delta)
    if q == 0.0:
        raise ArgumentError("delta must be nonzero for the side condition")
    D = -4.0 * p**3 - 27.0 * q**2
    if abs(D) < 1e-10 * (1.0 + p * p + q * q):
        double = -3.0 * q / (2.0 * p)
        single = 3.0 * q / p
        roots = tuple(sorted((double, double, _newton(single, p, q))))
        return CubicClassification(p, q, D, REPEATED_REAL, roots)
    if D > 0:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)
        phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        roots = tuple(sorted(_newton(r * math.cos(phi - 2.0 * math.pi * k / 3.0), p, q) for k in range(3)))
        return CubicClassification(p, q, D, THREE_DISTINCT_REAL, roots)
    s = math.sqrt(-D / 108.0)
    v3 = _newton(real_cbrt(-q / 2.0 + s) + real_cbrt(-q / 2.0 - s), p, q)
    # deflate: v^3 + p v + q = (v - v3)(v^2 + v3 v + v3^2 + p)
    m = -v3 / 2.0
    n = math.sqrt(0.75 * v3 * v3 + p)
    return CubicClassification(p, q, D, ONE_REAL_COMPLEX_PAIR, (m, n, v3))


# ---------------------------------------------------------------------------
# Family specifications
# ---------------------------------------------------------------------------


def _require(cond: bool, message: str):
    if not cond:
        raise ArgumentError(message)


def _near(a: float, b: float) -> bool:
    return abs(a - b) <= _EXCLUSION_TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class ExpTrig:
    """gamma = 0: ``exp(-c t)``, ``exp(c t/2) cos(sqrt3 c t/2)``, ``exp(c t/2) sin(...)``, c = cbrt(delta)."""

    delta: float

    def __post_init__(self):
        _require(float(self.delta) != 0.0, "delta must be nonzero (side condition)")


@dataclass(frozen=True)
class CubicDistinct:
    """Three distinct real characteristic roots v1, v2, -(v1 + v2)."""

    v1: float
    v2: float

    def __post_init__(self):
        v1, v2 = float(self.v1), float(self.v2)
        _require(not _near(v1, 0.0) and not _near(v2, 0.0), "roots must be nonzero (v1 != 0, v2 != 0)")
        _require(not _near(v2, v1), "distinct roots required (v2 != v1)")
        _require(not _near(v2, -2.0 * v1), "third root coincides with v1 (v2 != -2 v1)")
        _require(not _near(v2, -0.5 * v1), "third root coincides with v2 (v2 != -v1/2)")
        _require(not _near(v2, -v1), "third root would vanish, giving delta = 0 (v2 != -v1)")


@dataclass(frozen=True)
class CubicRepeated:
    """Double root v1, simple root -2 v1."""

    v1: float

    def __post_init__(self):
        _require(not _near(float(self.v1), 0.0), "repeated root must be nonzero (v1 != 0)")


@dataclass(frozen=True)
class CubicComplex:
    """Complex pair m +/- i n and real root -2 m."""

    m: float
    n: float

    def __post_init__(self):
        _require(not _near(float(self.m), 0.0), "real part must be nonzero (m != 0)")
        _require(not _near(float(self.n), 0.0), "imaginary part must be nonzero (n != 0)")


@dataclass(frozen=True)
class Airy:
    """gamma = delta t: Ai(-c t), Bi(-c t) and their variation-of-parameters partner."""

    delta: float

    def __post_init__(self):
        _require(float(self.delta) != 0.0, "delta must be nonzero (side condition)")


@dataclass(frozen=True)
class PowerSeedCurve:
    """Curve grown from the seed ``t^(-3/2)`` with ``delta = -27/8``, for t > 0.

    Members: ``t^(-3/2)``, ``(1 - 2 t^(-3/2)) exp(t^(3/2))``,
    ``(1 + 2 t^(-3/2)) exp(-t^(3/2))``; Wronskian 27/4.
    """

    delta: float = -27.0 / 8.0

    def __post_init__(self):
        _require(float(self.delta) == -27.0 / 8.0, "closed form exists only for delta = -27/8")


FamilySpec = Union[ExpTrig, CubicDistinct, CubicRepeated, CubicComplex, Airy, PowerSeedCurve]

AIRY_DEFAULT_GRID = Grid(-3.0, 3.0, 2001)


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------


def _exp_real(v: float, name: str) -> ClosedForm:
    return ClosedForm([(lambda t, k=k: v**k * np.exp(v * t)) for k in range(4)], name=name)


def _t_exp(v: float, name: str) -> ClosedForm:
    # d^k/dt^k [t e^{vt}] = (v^k t + k v^(k-1)) e^{vt}
    fns = [lambda t: t * np.exp(v * t)]
    fns += [(lambda t, k=k: (v**k * t + k * v ** (k - 1)) * np.exp(v * t)) for k in range(1, 4)]
    return ClosedForm(fns, name=name)


def _exp_complex(lam: complex, part: str, name: str) -> ClosedForm:
    take = np.real if part == "re" else np.imag
    return ClosedForm([(lambda t, k=k: take(lam**k * np.exp(lam * t))) for k in range(4)], name=name)


def _product(a, b):
    """Leibniz rule for (a b)^(k), a and b given as lists of 4 derivative callables."""
    binom = ((1,), (1, 1), (1, 2, 1), (1, 3, 3, 1))

    def kth(k):
        return lambda t: sum(c * a[j](t) * b[k - j](t) for j, c in enumerate(binom[k]))

    return [kth(k) for k in range(4)]


def _exp_of(phi):
    """Derivatives of exp(phi(t)), phi given as 4 derivative callables."""
    e = lambda t: np.exp(phi[0](t))  # noqa: E731
    return [
        e,
        lambda t: phi[1](t) * e(t),
        lambda t: (phi[2](t) + phi[1](t) ** 2) * e(t),
        lambda t: (phi[3](t) + 3.0 * phi[1](t) * phi[2](t) + phi[1](t) ** 3) * e(t),
    ]


def _power(c: float, p: float):
    """Derivatives of c t^p."""
    return [
        lambda t: c * t**p,
        lambda t: c * p * t ** (p - 1),
        lambda t: c * p * (p - 1) * t ** (p - 2),
        lambda t: c * p * (p - 1) * (p - 2) * t ** (p - 3),
    ]


def _plus_const(c: float, f):
    return [lambda t: c + f[0](t)] + list(f[1:])


class _AiryMember(ScalarFunction):
    """Ai(-c t) or Bi(-c t); higher derivatives use y'' = -delta t y."""

    def __init__(self, delta: float, which: str, name: str):
        c = real_cbrt(delta)
        half = AIRY_MAX_ABS_X / abs(c)
        super().__init__((-half, half), name)
        self.delta = float(delta)
        self.c = c
        self.index = 0 if which == "ai" else 1
        self._memo: dict[bytes, tuple] = {}

    def _airy(self, t: np.ndarray):
        # repeated evaluation on the same grid dominates the cost of this family
        key = t.tobytes() + bytes(str(t.shape), "ascii")
        vals = self._memo.get(key)
        if vals is None:
            vals = airy_arrays(-self.c * t)
            if len(self._memo) > 16:
                self._memo.clear()
            self._memo[key] = vals
        return vals

    def _deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        vals = self._airy(t)
        y = np.asarray(vals[self.index])
        yp = -self.c * np.asarray(vals[self.index + 2])
        if k == 0:
            return y
        if k == 1:
            return yp
        if k == 2:
            return -self.delta * t * y
        return -self.delta * (y + t * yp)


class _AiryPartner(ScalarFunction):
    """``(pi / c) (x Int y - y Int x)`` with cumulative integrals from the grid start."""

    def __init__(self, x: ScalarFunction, y: ScalarFunction, c: float, grid: Grid, name: str):
        super().__init__((grid.t0, grid.t1), name)
        self.x, self.y = x, y
        self.k = math.pi / c
        self.ix = Antiderivative(x, grid)
        self.iy = Antiderivative(y, grid)

    def _deriv(self, k, t):
        t = np.asarray(t, dtype=float)
        ix, iy = self.ix.deriv(0, t), self.iy.deriv(0, t)
        xs = [self.x.deriv(j, t) for j in range(k + 1)]
        ys = [self.y.deriv(j, t) for j in range(k + 1)]
        # d^k/dt^k [x Iy - y Ix] by Leibniz, with Iy' = y and Ix' = x
        out = xs[k] * iy - ys[k] * ix
        binom = ((1,), (1, 1), (1, 2, 1), (1, 3, 3, 1))[k]
        for j in range(k):
            c = binom[j]
            out = out + c * (xs[j] * ys[k - 1 - j] - ys[j] * xs[k - 1 - j])
        return self.k * out


# ---------------------------------------------------------------------------
# build_family
# ---------------------------------------------------------------------------


def build_family(spec: FamilySpec, grid: Grid | None = None) -> tuple[FundamentalSet, SideCondition, float]:
    """Fundamental set, side condition and closed-form Wronskian for a family.

    Parameters
    ----------
    spec : FamilySpec
    grid : Grid, optional
        Only used by :class:`Airy`, whose third member is built from
        cumulative integrals starting at ``grid.t0``; defaults to
        ``AIRY_DEFAULT_GRID``.
    """
    if isinstance(spec, ExpTrig):
        d = float(spec.delta)
        c = real_cbrt(d)
        lam = c * complex(0.5, math.sqrt(3.0) / 2.0)
        fset = FundamentalSet(
            _exp_real(-c, "exp(-c t)"),
            _exp_complex(lam, "re", "exp(c t/2) cos(sqrt3 c t/2)"),
            _exp_complex(lam, "im", "exp(c t/2) sin(sqrt3 c t/2)"),
        )
        return fset, SideCondition(gamma=constant(0.0), delta=d), -3.0 * d * math.sqrt(3.0) / 2.0

    if isinstance(spec, CubicDistinct):
        v1, v2 = float(spec.v1), float(spec.v2)
        v3 = -(v1 + v2)
        fset = FundamentalSet(_exp_real(v1, "exp(v1 t)"), _exp_real(v2, "exp(v2 t)"), _exp_real(v3, "exp(v3 t)"))
        sc = SideCondition(gamma=constant(-(v1 * v1 + v1 * v2 + v2 * v2)), delta=v1 * v2 * (v1 + v2))
        return fset, sc, (v2 - v1) * (2.0 * v1 + v2) * (v1 + 2.0 * v2)

    if isinstance(spec, CubicRepeated):
        v1 = float(spec.v1)
        fset = FundamentalSet(_exp_real(v1, "exp(v1 t)"), _t_exp(v1, "t exp(v1 t)"), _exp_real(-2.0 * v1, "exp(-2 v1 t)"))
        sc = SideCondition(gamma=constant(-3.0 * v1 * v1), delta=2.0 * v1**3)
        return fset, sc, 9.0 * v1 * v1

    if isinstance(spec, CubicComplex):
        m, n = float(spec.m), float(spec.n)
        lam = complex(m, n)
        fset = FundamentalSet(
            _exp_complex(lam, "re", "exp(m t) cos(n t)"),
            _exp_complex(lam, "im", "exp(m t) sin(n t)"),
            _exp_real(-2.0 * m, "exp(-2 m t)"),
        )
        sc = SideCondition(gamma=constant(n * n - 3.0 * m * m), delta=2.0 * m * (m * m + n * n))
        return fset, sc, n * (9.0 * m * m + n * n)

    if isinstance(spec, Airy):
        d = float(spec.delta)
        grid = AIRY_DEFAULT_GRID if grid is None else grid
        x = _AiryMember(d, "ai", "Ai(-c t)")
        y = _AiryMember(d, "bi", "Bi(-c t)")
        lo, hi = x.domain
        if grid.t0 < lo or grid.t1 > hi:
            raise ArgumentError(f"Airy family for delta={d} is limited to t in [{lo:g}, {hi:g}]")
        c = real_cbrt(d)
        z = _AiryPartner(x, y, c, grid, "(pi/c)(x Int y - y Int x)")
        gamma = ClosedForm([lambda t: d * t, lambda t: d + 0.0 * t, lambda t: 0.0 * t, lambda t: 0.0 * t], name="delta t")
        return FundamentalSet(x, y, z), SideCondition(gamma=gamma, delta=d), -c / math.pi

    if isinstance(spec, PowerSeedCurve):
        d = float(spec.delta)
        pos = (0.0, math.inf)
        x = ClosedForm(_power(1.0, -1.5), domain=pos, name="t^(-3/2)")
        up = _exp_of(_power(1.0, 1.5))
        down = _exp_of(_power(-1.0, 1.5))
        y = ClosedForm(_product(_plus_const(1.0, _power(-2.0, -1.5)), up), domain=pos, name="(1-2t^(-3/2))exp(t^(3/2))")
        z = ClosedForm(_product(_plus_const(1.0, _power(2.0, -1.5)), down), domain=pos, name="(1+2t^(-3/2))exp(-t^(3/2))")
        # gamma_0(t) = (8 delta t^3 - 105) / (12 t^2) = (2 delta / 3) t - (35/4) t^(-2)
        a = 2.0 * d / 3.0
        gamma = ClosedForm(
            [
                lambda t: a * t - 8.75 * t**-2.0,
                lambda t: a + 17.5 * t**-3.0,
                lambda t: -52.5 * t**-4.0,
                lambda t: 210.0 * t**-5.0,
            ],
            domain=pos,
            name="gamma_0",
        )
        return FundamentalSet(x, y, z), SideCondition(gamma=gamma, delta=d), 27.0 / 4.0

    raise ArgumentError(f"unknown family spec {spec!r}")


def family_from_cubic(gamma_tilde: float, delta: float) -> FamilySpec:
    """Pick the constant-gamma family matching the cubic's root structure."""
    cls = classify_cubic(gamma_tilde, delta)
    if cls.kind == THREE_DISTINCT_REAL:
        v1, v2, _ = cls.roots
        return CubicDistinct(v1, v2)
    if cls.kind == REPEATED_REAL:
        # roots sorted: the double root is the pair of equal entries
        r = cls.roots
        return CubicRepeated(r[1])
    m, n, _ = cls.roots
    return CubicComplex(m, n)
