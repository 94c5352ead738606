"""Space-curve invariants and the constant-ratio certificate.

For a curve r(t) = (x, y, z) the torsion is the mixed product of
r', r'', r''' over |r' x r''|^2 and the distance from the origin to the
osculating plane is |det(r, r', r'')| / |r' x r''|. A curve whose
ratio torsion / distance^2 stays constant is certified here, together
with the equivalent Wronskian form W(x',y',z') = alpha W(x,y,z)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ArgumentError, RegularityError
from .numkit import Grid, as_grid, finite_difference_columns
from .wronskian import FundamentalSet, det3

__all__ = [
    "SampledCurve",
    "FrenetData",
    "TzitzeicaReport",
    "curvature",
    "torsion",
    "osculating_distance",
    "plane_distance",
    "frenet",
    "certify_tzitzeica",
    "surface_residual",
    "SURFACES",
    "affine_map",
    "CYCLIC_MAP",
    "DEFAULT_TOL",
    "VERDICT_KEYS",
]

DEFAULT_TOL = 1e-5
ZERO_TOL = 1e-12
MIN_CERTIFIED_FRACTION = 0.9
# points skipped at each end when derivatives come from finite differences
FD_EDGE = 2

VERDICT_KEYS = (
    "assumptions",
    "alpha_constant",
    "wronskian_relation",
    "alpha_formula",
    "surfaces",
    "passed",
)


@dataclass(frozen=True)
class SampledCurve:
    """Curve samples on a uniform grid.

    Parameters
    ----------
    grid : Grid
    positions : array, shape (3, n)
        Rows x, y, z.
    derivatives : array, shape (3, 3, n), optional
        ``derivatives[k-1]`` holds r^(k) for k = 1..3. When absent,
        derivatives are central differences (one-sided at the ends), and
        the two points at each end are excluded from verdicts.
    provenance : str
    """

    grid: Grid
    positions: np.ndarray
    derivatives: np.ndarray | None = None
    provenance: str = "external"

    def __post_init__(self):
        grid = as_grid(self.grid)
        object.__setattr__(self, "grid", grid)
        pos = np.array(self.positions, dtype=float)
        if pos.shape != (3, grid.n):
            raise ArgumentError(f"positions must have shape (3, {grid.n}), got {pos.shape}")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)
        if self.derivatives is None:
            if grid.n < 7:
                raise ArgumentError("curves without derivative columns need at least 7 samples")
        else:
            der = np.array(self.derivatives, dtype=float)
            if der.shape != (3, 3, grid.n):
                raise ArgumentError(f"derivatives must have shape (3, 3, {grid.n}), got {der.shape}")
            der.flags.writeable = False
            object.__setattr__(self, "derivatives", der)

    @classmethod
    def from_fundamental_set(cls, fset: FundamentalSet, grid, provenance: str = "") -> SampledCurve:
        """Sample ``(x, y, z)`` and their analytic derivatives on ``grid``."""
        grid = as_grid(grid)
        d = np.array([f.derivatives(grid.points) for f in fset.members])  # (coord, order, n)
        return cls(grid, d[:, 0, :], np.transpose(d[:, 1:, :], (1, 0, 2)), provenance or "fundamental set")

    @property
    def has_derivatives(self) -> bool:
        return self.derivatives is not None

    @property
    def t(self) -> np.ndarray:
        return self.grid.points

    def derivative(self, k: int) -> np.ndarray:
        """r^(k), shape (3, n); k = 0 returns the positions."""
        if k == 0:
            return self.positions
        if k not in (1, 2, 3):
            raise ArgumentError(f"derivative order must be 0..3, got {k}")
        if self.derivatives is not None:
            return self.derivatives[k - 1]
        return np.array([finite_difference_columns(row, self.grid.h, k) for row in self.positions])

    def interior_mask(self) -> np.ndarray:
        """Points eligible for verdicts (finite-difference edges excluded)."""
        mask = np.ones(self.grid.n, dtype=bool)
        if self.derivatives is None:
            mask[:FD_EDGE] = False
            mask[-FD_EDGE:] = False
        return mask


@dataclass(frozen=True)
class FrenetData:
    """Per-point curvature, torsion and osculating-plane distance.

    ``d`` is the unsigned distance; ``d_signed`` keeps the sign of
    ``det(r, r', r'')``.
    """

    k: np.ndarray
    tau: np.ndarray
    d: np.ndarray
    d_signed: np.ndarray


def _cross(a, b):
    return np.array([a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])


def _point_vectors(c: SampledCurve, i: int):
    if not -c.grid.n <= i < c.grid.n:
        raise ArgumentError(f"grid index {i} out of range")
    return [c.derivative(k)[:, i] for k in range(4)]


def curvature(c: SampledCurve, i: int) -> float:
    """``|r' x r''| / |r'|^3`` at grid index i."""
    _, r1, r2, _ = _point_vectors(c, i)
    speed = float(np.linalg.norm(r1))
    if speed < ZERO_TOL:
        raise RegularityError(f"curve is not regular at t = {c.t[i]:.6g} (|r'| = {speed:.3g})")
    return float(np.linalg.norm(_cross(r1, r2))) / speed**3


def _cross_norm(r1, r2, t) -> float:
    n = float(np.linalg.norm(_cross(r1, r2)))
    if n < ZERO_TOL:
        raise RegularityError(f"curvature vanishes at t = {t:.6g} (|r' x r''| = {n:.3g})")
    return n


def torsion(c: SampledCurve, i: int) -> float:
    """Mixed product ``<r', r'', r'''>`` over ``|r' x r''|^2``."""
    _, r1, r2, r3 = _point_vectors(c, i)
    n = _cross_norm(r1, r2, c.t[i])
    return float(det3(r1, r2, r3)) / n**2


def osculating_distance(c: SampledCurve, i: int, signed: bool = False) -> float:
    """Distance from the origin to the osculating plane, ``|det(r, r', r'')| / |r' x r''|``."""
    r0, r1, r2, _ = _point_vectors(c, i)
    n = _cross_norm(r1, r2, c.t[i])
    val = float(det3(r0, r1, r2)) / n
    return val if signed else abs(val)


def plane_distance(c: SampledCurve, i: int) -> float:
    """Same distance from the point-normal form of the plane: ``|<r, n>| / |n|``, n = r' x r''."""
    r0, r1, r2, _ = _point_vectors(c, i)
    normal = _cross(r1, r2)
    norm = float(np.linalg.norm(normal))
    if norm < ZERO_TOL:
        raise RegularityError(f"curvature vanishes at t = {c.t[i]:.6g}")
    return abs(float(np.dot(r0, normal))) / norm


def _kernels(c: SampledCurve):
    r0, r1, r2, r3 = (c.derivative(k) for k in range(4))
    cross = _cross(r1, r2)
    cross_norm = np.sqrt(np.sum(cross * cross, axis=0))
    speed = np.sqrt(np.sum(r1 * r1, axis=0))
    w = det3(r0, r1, r2)
    wd = det3(r1, r2, r3)
    return r0, r1, r2, speed, cross_norm, w, wd


def frenet(c: SampledCurve) -> FrenetData:
    """Vectorised curvature, torsion and distance; NaN where undefined."""
    _, _, _, speed, cn, w, wd = _kernels(c)
    with np.errstate(divide="ignore", invalid="ignore"):
        k = np.where(speed >= ZERO_TOL, cn / speed**3, np.nan)
        ok = cn >= ZERO_TOL
        tau = np.where(ok, wd / cn**2, np.nan)
        ds = np.where(ok, w / cn, np.nan)
    return FrenetData(k, tau, np.abs(ds), ds)


@dataclass
class TzitzeicaReport:
    """Outcome of :func:`certify_tzitzeica`.

    ``verdict`` always carries the keys in ``VERDICT_KEYS``; checks that do
    not apply (no delta, no surfaces) are recorded as passed.
    """

    provenance: str
    delta: float | None
    W0: float
    W_std: float
    alpha_est: float
    alpha_std: float
    alpha_formula: float | None
    relation_residual: float
    surface_residuals: dict[str, float]
    verdict: dict[str, bool]
    tolerances: dict[str, float]
    n_points: int
    n_certified: int
    violated: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.verdict["passed"])

    def to_dict(self) -> dict:
        """JSON-ready mapping (non-finite numbers become ``None``)."""

        def clean(v):
            if v is None:
                return None
            v = float(v)
            return v if math.isfinite(v) else None

        return {
            "provenance": self.provenance,
            "delta": clean(self.delta),
            "W0": clean(self.W0),
            "W_std": clean(self.W_std),
            "alpha_est": clean(self.alpha_est),
            "alpha_std": clean(self.alpha_std),
            "alpha_formula": clean(self.alpha_formula),
            "relation_residual": clean(self.relation_residual),
            "surface_residuals": {k: clean(v) for k, v in self.surface_residuals.items()},
            "verdict": {k: bool(self.verdict[k]) for k in VERDICT_KEYS},
            "tolerances": dict(self.tolerances),
            "n_points": self.n_points,
            "n_certified": self.n_certified,
            "violated": list(self.violated),
        }


def certify_tzitzeica(c: SampledCurve, delta: float | None = None, tol: float = DEFAULT_TOL, surfaces=()) -> TzitzeicaReport:
    """Check that torsion / distance^2 is constant along the curve.

    Points must be regular with nonzero curvature, torsion and distance
    (each above a 1e-12 scaled threshold); at least 90% of the eligible
    points have to pass these screens. The curve constant is the mean of
    the per-point ratio over screened points.

    Parameters
    ----------
    c : SampledCurve
    delta : float, optional
        Coefficient of u in the side condition, when known; enables the
        comparison of the estimated constant with ``-delta / W0``.
    tol : float
        Relative tolerance for constancy and formula checks, absolute for
        the Wronskian-form residual and surface residuals.
    surfaces : iterable of str
        Names from :data:`SURFACES` to measure containment against.
    """
    if not tol > 0:
        raise ArgumentError("tolerance must be positive")
    r0, r1, r2, speed, cn, w, wd = _kernels(c)
    eligible = c.interior_mask()
    r3 = c.derivative(3)
    n0, n1, n2, n3 = (np.sqrt(np.sum(v * v, axis=0)) for v in (r0, r1, r2, r3))
    # zero thresholds scale with the largest row, as for Wronskians
    screens = {
        "regular": speed >= ZERO_TOL,
        "nonzero curvature": cn > ZERO_TOL * (1.0 + np.maximum(n1, n2)),
        "nonzero torsion": np.abs(wd) > ZERO_TOL * (1.0 + np.maximum.reduce([n1, n2, n3])),
        "nonzero distance": np.abs(w) > ZERO_TOL * (1.0 + np.maximum.reduce([n0, n1, n2])),
        "finite samples": np.all(np.isfinite(np.concatenate([r0, r1, r2, r3])), axis=0),
    }
    certified = eligible.copy()
    violated = []
    n_eligible = int(eligible.sum())
    for name, ok in screens.items():
        ok_el = ok & eligible
        if ok_el.sum() < MIN_CERTIFIED_FRACTION * n_eligible:
            violated.append(name)
        certified &= ok
    n_cert = int(certified.sum())
    assumptions_ok = not violated and n_cert >= MIN_CERTIFIED_FRACTION * n_eligible and n_cert > 0

    nan = float("nan")
    if n_cert:
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = wd[certified] / cn[certified] ** 2
            dist = np.abs(w[certified]) / cn[certified]
            ratio = tau / dist**2
        W0 = float(np.mean(w[certified]))
        W_std = float(np.std(w[certified]))
        alpha_est = float(np.mean(ratio))
        alpha_std = float(np.std(ratio))
        relation = float(np.max(np.abs(wd[certified] - alpha_est * w[certified] ** 2)))
        relation_scale = max(1.0, float(np.max(np.abs(alpha_est * w[certified] ** 2))))
    else:
        W0 = W_std = alpha_est = alpha_std = relation = relation_scale = nan

    alpha_formula = None
    formula_ok = True
    if delta is not None:
        delta = float(delta)
        alpha_formula = -delta / W0 if W0 and math.isfinite(W0) else nan
        formula_ok = bool(abs(abs(alpha_est) - abs(alpha_formula)) < tol * abs(alpha_formula))

    surface_res = {name: surface_residual(c, name) for name in surfaces}
    surfaces_ok = all(v < tol for v in surface_res.values())

    verdict = {
        "assumptions": bool(assumptions_ok),
        "alpha_constant": bool(alpha_std < tol * abs(alpha_est)),
        "wronskian_relation": bool(relation < tol * relation_scale),
        "alpha_formula": formula_ok,
        "surfaces": bool(surfaces_ok),
    }
    verdict["passed"] = all(verdict.values())
    return TzitzeicaReport(
        provenance=c.provenance,
        delta=delta,
        W0=W0,
        W_std=W_std,
        alpha_est=alpha_est,
        alpha_std=alpha_std,
        alpha_formula=alpha_formula,
        relation_residual=relation,
        surface_residuals=surface_res,
        verdict=verdict,
        tolerances={"tol": float(tol), "zero": ZERO_TOL, "min_certified_fraction": MIN_CERTIFIED_FRACTION},
        n_points=c.grid.n,
        n_certified=n_cert,
        violated=violated,
    )


SURFACES = {
    "x-cubic": lambda x, y, z: x * (y * y + z * z) - 1.0,
    "z-cubic": lambda x, y, z: z * (x * x + y * y) - 1.0,
    "yz-quadric": lambda x, y, z: y * z - 1.0 + 4.0 * x * x,
}


def surface_residual(c: SampledCurve, surface: str) -> float:
    """Max over the grid of |F(x, y, z)| for a named implicit surface F = 0.

    ``x-cubic``: x(y^2 + z^2) = 1; ``z-cubic``: z(x^2 + y^2) = 1;
    ``yz-quadric``: yz = 1 - 4x^2.
    """
    try:
        form = SURFACES[surface]
    except KeyError:
        raise ArgumentError(f"unknown surface {surface!r}; choose from {sorted(SURFACES)}") from None
    x, y, z = c.positions
    return float(np.max(np.abs(form(x, y, z))))


# (x, y, z) -> (y, z, x): carries x(y^2+z^2) = 1 onto z(x^2+y^2) = 1
CYCLIC_MAP = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])


def affine_map(c: SampledCurve, matrix) -> SampledCurve:
    """Apply the linear map ``r -> M r`` to positions and derivative columns.

    Translations are not supported: they would move the origin the
    distance is measured from.
    """
    M = np.asarray(matrix, dtype=float)
    if M.shape != (3, 3):
        raise ArgumentError("map must be a 3x3 matrix")
    if abs(np.linalg.det(M)) <= ZERO_TOL:
        raise ArgumentError("map matrix is singular")
    der = None if c.derivatives is None else np.einsum("ij,kjn->kin", M, c.derivatives)
    return SampledCurve(c.grid, M @ c.positions, der, provenance=f"{c.provenance} (mapped)")
