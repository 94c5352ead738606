"""Command-line front end.

Subcommands::

    wronskia generate --family exp-trig --delta 1 --derivs --out curve.csv
    wronskia reduce --seed power:-1.5 --delta -3.375 --report report.json
    wronskia certify curve.csv --delta 1 --surface x-cubic
    wronskia repro --outdir artifacts

Exit codes: 0 pass, 1 certification fail, 2 argument/format error,
3 singular seed or vanishing Wronskian, 4 IO failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .exceptions import (
    ArgumentError,
    DegeneracyError,
    DomainError,
    RegularityError,
    SingularSeedError,
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
)
from .formats import format_curve_csv, format_report_json, parse_curve_csv
from .geometry import CYCLIC_MAP, DEFAULT_TOL, SURFACES, SampledCurve, affine_map, certify_tzitzeica
from .numkit import Grid
from .reduction import match_basis, parse_seed, run_pipeline

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ARGS = 2
EXIT_SINGULAR = 3
EXIT_IO = 4

TOL_ENV = "WRONSKIA_TOL"

FAMILIES = ("exp-trig", "cubic-distinct", "cubic-repeated", "cubic-complex", "airy", "example4")

DEFAULT_INTERVALS = {
    "exp-trig": (-1.0, 1.0),
    "cubic-distinct": (-1.0, 1.0),
    "cubic-repeated": (-1.0, 1.0),
    "cubic-complex": (-1.0, 1.0),
    "airy": (-3.0, 3.0),
    "example4": (1.1, 5.0),
}


class _Usage(Exception):
    """Raised instead of argparse's SystemExit so main() owns exit codes."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}")


def resolve_tol(flag: float | None) -> float:
    """Tolerance from the flag, else ``WRONSKIA_TOL``, else the default."""
    if flag is not None:
        tol = flag
    elif os.environ.get(TOL_ENV):
        raw = os.environ[TOL_ENV]
        try:
            tol = float(raw)
        except ValueError:
            raise ArgumentError(f"{TOL_ENV}={raw!r} is not a number") from None
    else:
        tol = DEFAULT_TOL
    if not (math.isfinite(tol) and tol > 0):
        raise ArgumentError(f"tolerance must be positive and finite, got {tol}")
    return tol


def family_spec(args):
    fam = args.family
    if fam == "exp-trig":
        return ExpTrig(args.delta)
    if fam == "cubic-distinct":
        return CubicDistinct(args.v1, args.v2)
    if fam == "cubic-repeated":
        return CubicRepeated(args.v1)
    if fam == "cubic-complex":
        return CubicComplex(args.m, args.imag)
    if fam == "airy":
        return Airy(args.delta)
    return PowerSeedCurve()


def _grid(args, default: tuple[float, float]) -> Grid:
    t0 = default[0] if args.t0 is None else args.t0
    t1 = default[1] if args.t1 is None else args.t1
    return Grid(t0, t1, args.n)


def sample_family(spec, grid: Grid, provenance: str):
    fset, sc, expected = build_family(spec, grid)
    return SampledCurve.from_fundamental_set(fset, grid, provenance), sc, expected


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _provenance(args, extra: str = "") -> str:
    parts = [f"family={args.family}"]
    for name in ("delta", "v1", "v2", "m", "imag"):
        if name in _FAMILY_PARAMS[args.family]:
            parts.append(f"{name}={getattr(args, name)!r}")
    return " ".join(parts) + extra


_FAMILY_PARAMS = {
    "exp-trig": ("delta",),
    "cubic-distinct": ("v1", "v2"),
    "cubic-repeated": ("v1",),
    "cubic-complex": ("m", "imag"),
    "airy": ("delta",),
    "example4": (),
}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    spec = family_spec(args)
    grid = _grid(args, DEFAULT_INTERVALS[args.family])
    curve, _, _ = sample_family(spec, grid, _provenance(args))
    _emit(format_curve_csv(curve, derivs=args.derivs), args.out)
    return EXIT_PASS


def _reference_for(seed, choice: str):
    if choice == "none":
        return None
    if choice == "example4":
        return PowerSeedCurve()
    # auto: the only seed with a hard-coded closed-form curve
    if seed.label == "power:-1.5" and seed.delta == -27.0 / 8.0:
        return PowerSeedCurve()
    return None


def run_reduce(seed_text: str, delta: float, grid: Grid, tol: float, reference: str = "auto", surfaces=()):
    """Pipeline plus certificate; returns (curve, report, extra JSON keys)."""
    seed = parse_seed(seed_text, delta)
    result = run_pipeline(seed, grid)
    fset = result.fundamental_set
    extra = {"basis_fit": None}
    ref_spec = _reference_for(seed, reference)
    if ref_spec is not None:
        ref, _, _ = build_family(ref_spec, grid)
        fit = match_basis(fset, ref, grid)
        fset = fit.rebased
        extra["basis_fit"] = {
            "reference": type(ref_spec).__name__,
            "residual": fit.residual,
            "condition": fit.condition,
        }
    provenance = f"reduce seed={seed.label} delta={delta!r}"
    if ref_spec is not None:
        provenance += " basis=reference"
    curve = SampledCurve.from_fundamental_set(fset, grid, provenance)
    report = certify_tzitzeica(curve, delta, tol, surfaces)
    return curve, report, extra


def cmd_reduce(args) -> int:
    tol = resolve_tol(args.tol)
    default = (1.1, 5.0) if args.seed.startswith("power:") else (0.0, 1.0)
    grid = _grid(args, default)
    curve, report, extra = run_reduce(args.seed, args.delta, grid, tol, args.reference, tuple(args.surface))
    _emit(format_curve_csv(curve, derivs=True), args.out)
    text = format_report_json(report, extra)
    if args.report:
        _emit(text, args.report)
    else:
        sys.stderr.write(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_certify(args) -> int:
    tol = resolve_tol(args.tol)
    if args.csv == "-":
        text = sys.stdin.read()
    else:
        with open(args.csv, encoding="utf-8", newline="") as fh:
            text = fh.read()
    curve = parse_curve_csv(text, provenance=args.csv)
    report = certify_tzitzeica(curve, args.delta, tol, tuple(args.surface))
    text = format_report_json(report)
    if args.report:
        _emit(text, args.report)
    sys.stdout.write(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# repro
# ---------------------------------------------------------------------------

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class ReproCase:
    name: str
    spec: object
    interval: tuple[float, float]
    delta: float
    surfaces: tuple[str, ...] = ()
    reference_W: float | None = None
    reference_alpha: float | None = None
    # compare |W| only: the printed sign of this constant disagrees with its own triple
    magnitude_W: bool = False
    mapped: bool = False


REPRO_CASES = (
    ReproCase("exp-trig", ExpTrig(1.0), (-1.0, 1.0), 1.0, ("x-cubic",), -1.5 * SQRT3, -2 * SQRT3 / 9, magnitude_W=True),
    ReproCase("exp-trig-cyclic", ExpTrig(1.0), (-1.0, 1.0), 1.0, ("z-cubic",), mapped=True),
    ReproCase("cubic-distinct", CubicDistinct(1.0, 2.0), (-1.0, 1.0), 6.0, (), 20.0),
    ReproCase("cubic-repeated", CubicRepeated(1.0), (-1.0, 1.0), 2.0, (), 9.0),
    ReproCase("cubic-complex", CubicComplex(1.0, 2.0), (-1.0, 1.0), 10.0, (), 26.0),
    ReproCase("airy", Airy(1.0), (-3.0, 3.0), 1.0, (), -1.0 / math.pi, math.pi),
    ReproCase("example4", PowerSeedCurve(), (1.1, 5.0), -27.0 / 8.0, ("yz-quadric",), 27.0 / 4.0, 0.5),
)

SUMMARY_COLUMNS = ("case", "quantity", "computed", "reference", "abs_err", "rel_err", "rel_err_coarse", "compare", "within_tol")


def _row(case, quantity, computed, reference, coarse, magnitude, tol):
    if magnitude:
        computed_cmp, reference_cmp = abs(computed), abs(reference)
    else:
        computed_cmp, reference_cmp = computed, reference
    abs_err = abs(computed_cmp - reference_cmp)
    rel = abs_err / abs(reference_cmp)
    coarse_rel = abs(abs(coarse) - abs(reference)) / abs(reference) if magnitude else abs(coarse - reference) / abs(reference)
    return {
        "case": case,
        "quantity": quantity,
        "computed": computed,
        "reference": reference,
        "abs_err": abs_err,
        "rel_err": rel,
        "rel_err_coarse": coarse_rel,
        "compare": "magnitude" if magnitude else "signed",
        "within_tol": bool(rel < tol),
    }


def _case_curve(case: ReproCase, n: int):
    grid = Grid(case.interval[0], case.interval[1], n)
    curve, _, _ = sample_family(case.spec, grid, f"repro {case.name}")
    if case.mapped:
        curve = affine_map(curve, CYCLIC_MAP)
    return curve


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _coarse_n(n: int) -> int:
    return max(7, (n - 1) // 4 + 1)


def repro(outdir: Path, n: int, tol: float) -> tuple[list[dict], bool]:
    """Regenerate every worked example; returns summary rows and overall pass."""
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    all_ok = True
    nc = _coarse_n(n)
    for case in REPRO_CASES:
        curve = _case_curve(case, n)
        report = certify_tzitzeica(curve, case.delta, tol, case.surfaces)
        coarse = certify_tzitzeica(_case_curve(case, nc), case.delta, tol, case.surfaces)
        _write(outdir / f"{case.name}.csv", format_curve_csv(curve, derivs=True))
        _write(outdir / f"{case.name}.json", format_report_json(report))
        all_ok &= report.passed
        if case.reference_W is not None:
            rows.append(_row(case.name, "W0", report.W0, case.reference_W, coarse.W0, case.magnitude_W, tol))
        if case.reference_alpha is not None:
            rows.append(_row(case.name, "alpha", report.alpha_est, case.reference_alpha, coarse.alpha_est, False, tol))

    grid = Grid(1.1, 5.0, n)
    curve, report, extra = run_reduce("power:-1.5", -27.0 / 8.0, grid, tol)
    _, coarse, _ = run_reduce("power:-1.5", -27.0 / 8.0, Grid(1.1, 5.0, nc), tol)
    _write(outdir / "reduce-power.csv", format_curve_csv(curve, derivs=True))
    _write(outdir / "reduce-power.json", format_report_json(report, extra))
    all_ok &= report.passed and extra["basis_fit"]["residual"] < tol
    rows.append(_row("reduce-power", "W0", report.W0, 27.0 / 4.0, coarse.W0, False, tol))
    rows.append(_row("reduce-power", "alpha", report.alpha_est, 0.5, coarse.alpha_est, False, tol))

    all_ok &= all(r["within_tol"] for r in rows)
    lines = [",".join(SUMMARY_COLUMNS)]
    for r in rows:
        lines.append(",".join(repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in SUMMARY_COLUMNS))
    _write(outdir / "summary.csv", "\n".join(lines) + "\n")
    summary = {"n": n, "n_coarse": nc, "tol": tol, "passed": bool(all_ok), "rows": rows}
    _write(outdir / "summary.json", json.dumps(summary, indent=2) + "\n")
    return rows, bool(all_ok)


def cmd_repro(args) -> int:
    tol = resolve_tol(args.tol)
    rows, ok = repro(Path(args.outdir), args.n, tol)
    width = max(len(r["case"]) for r in rows)
    for r in rows:
        flag = "ok  " if r["within_tol"] else "MISS"
        print(f"{flag} {r['case']:<{width}} {r['quantity']:<5} computed={r['computed']:.12g} reference={r['reference']:.12g} rel_err={r['rel_err']:.2e}")
    print("all within tolerance" if ok else "some values miss tolerance")
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_grid(p, n_default=2001):
    p.add_argument("--t0", type=float, default=None, help="grid start (family default if omitted)")
    p.add_argument("--t1", type=float, default=None, help="grid end")
    p.add_argument("--n", type=int, default=n_default, help="number of grid points (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wronskia", description="Generate and certify curves with constant torsion / distance^2.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="sample a closed-form family to CSV")
    g.add_argument("--family", required=True, choices=FAMILIES)
    g.add_argument("--delta", type=float, default=1.0)
    g.add_argument("--v1", type=float, default=1.0)
    g.add_argument("--v2", type=float, default=2.0)
    g.add_argument("--m", type=float, default=1.0, help="real part of the complex root pair")
    g.add_argument("--imag", type=float, default=2.0, help="imaginary part of the complex root pair")
    _add_grid(g)
    g.add_argument("--derivs", action="store_true", help="emit the 13-column form with derivatives")
    g.add_argument("--out", default=None)
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("reduce", help="build a curve from one known solution by reduction of order")
    r.add_argument("--seed", required=True, help="power:P or exp:V")
    r.add_argument("--delta", type=float, required=True)
    _add_grid(r)
    r.add_argument("--reference", choices=("auto", "none", "example4"), default="auto",
                   help="re-express the basis in a known closed form before certifying")
    r.add_argument("--surface", action="append", default=[], choices=sorted(SURFACES))
    r.add_argument("--tol", type=float, default=None)
    r.add_argument("--out", default=None, help="curve CSV path (stdout if omitted)")
    r.add_argument("--report", default=None, help="report JSON path (stderr if omitted)")
    r.set_defaults(func=cmd_reduce)

    c = sub.add_parser("certify", help="certify a curve CSV")
    c.add_argument("csv", help="curve CSV path, or - for stdin")
    c.add_argument("--delta", type=float, default=None)
    c.add_argument("--surface", action="append", default=[], choices=sorted(SURFACES))
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--report", default=None, help="also write the report here")
    c.set_defaults(func=cmd_certify)

    p = sub.add_parser("repro", help="regenerate every worked example with a summary table")
    p.add_argument("--outdir", default="repro")
    p.add_argument("--n", type=int, default=2001)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Usage as exc:
        print(exc, file=sys.stderr)
        return EXIT_ARGS
    except (SingularSeedError, WronskianVanishes, DegeneracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (ArgumentError, DomainError, RegularityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
