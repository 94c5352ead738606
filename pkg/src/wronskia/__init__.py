"""Wronskian-constrained third-order ODEs and the space curves they generate.

Solutions x, y, z of ``u''' + gamma u' + delta u = 0`` trace a curve whose
torsion over squared osculating-plane distance is the constant
``-delta / W(x, y, z)``. The package builds such triples in closed form or
by reduction of order from one known solution, and certifies sampled
curves numerically.
"""

from .estimators import FrenetFeatures, TzitzeicaCertifier
from .exceptions import (
    ArgumentError,
    DegeneracyError,
    DomainError,
    RegularityError,
    SingularSeedError,
    WronskiaError,
    WronskianVanishes,
)
from .families import (
    Airy,
    CubicComplex,
    CubicDistinct,
    CubicRepeated,
    ExpTrig,
    PowerSeedCurve,
    build_family,
    classify_cubic,
    family_from_cubic,
)
from .formats import format_curve_csv, parse_curve_csv, read_curve_csv
from .geometry import (
    CYCLIC_MAP,
    SURFACES,
    SampledCurve,
    TzitzeicaReport,
    affine_map,
    certify_tzitzeica,
    frenet,
    surface_residual,
)
from .numkit import Grid, airy, integrate_cumulative, rk4_linear2, rk4_linear3
from .reduction import compose, gamma_from_seed, match_basis, parse_seed, reduce, run_pipeline, solve_reduced
from .wronskian import FundamentalSet, SideCondition, compatibility_alpha, wronskian3, wronskian3_deriv

__version__ = "0.1.0"

__all__ = [
    "Airy",
    "ArgumentError",
    "CYCLIC_MAP",
    "CubicComplex",
    "CubicDistinct",
    "CubicRepeated",
    "DegeneracyError",
    "DomainError",
    "ExpTrig",
    "FrenetFeatures",
    "FundamentalSet",
    "Grid",
    "PowerSeedCurve",
    "RegularityError",
    "SURFACES",
    "SampledCurve",
    "SideCondition",
    "SingularSeedError",
    "TzitzeicaCertifier",
    "TzitzeicaReport",
    "WronskiaError",
    "WronskianVanishes",
    "affine_map",
    "airy",
    "build_family",
    "certify_tzitzeica",
    "classify_cubic",
    "compatibility_alpha",
    "compose",
    "family_from_cubic",
    "format_curve_csv",
    "frenet",
    "gamma_from_seed",
    "integrate_cumulative",
    "match_basis",
    "parse_curve_csv",
    "parse_seed",
    "read_curve_csv",
    "reduce",
    "rk4_linear2",
    "rk4_linear3",
    "run_pipeline",
    "solve_reduced",
    "surface_residual",
    "wronskian3",
    "wronskian3_deriv",
]
