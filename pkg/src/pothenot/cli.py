"""Command-line interface for the resection toolkit.

Exit codes: 0 success, 1 domain failure (degenerate base, inconsistent
data), 2 usage error, 3 verification mismatch.  Positions are reported in
the canonical frame: circumcenter at the origin, landmark A on the
positive x axis.
"""

from __future__ import annotations

import json
import math
import os
import sys

import click

from .errors import (
    AmbiguousBand,
    BoundaryHit,
    DegenerateBase,
    EmptyRegion,
    Inconsistent,
    InvalidGrid,
    IoFailure,
    NotOnEllipse,
    NotOnSurface,
    VertexCollision,
)
from .geometry import (
    BaseTriangle,
    CosTriple,
    pillow_value,
    triangle_from_angles,
    triangle_from_sides,
)
from .grunert import lambda_coeffs, solve_on_pillowcase
from .oracle import region_sweep
from .regions import classify, count_prediction
from .surface import export_decomposition
from .tolerances import DEFAULT, Tolerances

_DOMAIN_ERRORS = (DegenerateBase, VertexCollision, Inconsistent,
                  NotOnEllipse, AmbiguousBand, BoundaryHit, IoFailure)


def _tolerances() -> Tolerances:
    raw = os.environ.get("POTHENOT_TOL")
    if raw is None:
        return DEFAULT
    try:
        return DEFAULT.with_accept(float(raw))
    except ValueError:
        raise click.UsageError(f"POTHENOT_TOL must be a number, got {raw!r}")


def _base_options(f):
    f = click.option("--sides", nargs=3, type=float, default=None,
                     metavar="D1 D2 D3",
                     help="Side lengths |BC| |AC| |AB| of the landmark "
                          "triangle.")(f)
    f = click.option("--angles", nargs=2, type=float, default=None,
                     metavar="ALPHA BETA",
                     help="Two interior angles (unit circumcircle).")(f)
    f = click.option("--deg", is_flag=True,
                     help="Angles are given in degrees.")(f)
    return f


def _build_base(sides, angles, deg) -> BaseTriangle:
    if (sides is None) == (angles is None):
        raise click.UsageError("give exactly one of --sides or --angles")
    try:
        if sides is not None:
            return triangle_from_sides(*sides)
        return triangle_from_angles(*angles, degrees=deg)
    except DegenerateBase as exc:
        raise click.ClickException(str(exc))


def _parse_triple(values) -> CosTriple:
    try:
        return CosTriple(*values)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _echo_base(base: BaseTriangle) -> None:
    d1, d2, d3 = base.sides
    deg = tuple(math.degrees(v) for v in (base.alpha, base.beta, base.gamma))
    click.echo(f"base sides ({d1:.6g}, {d2:.6g}, {d3:.6g})  "
               f"angles ({deg[0]:.4f}, {deg[1]:.4f}, {deg[2]:.4f}) deg  "
               f"kind {base.kind()}")


@click.group()
@click.version_option(package_name="pothenot")
def main() -> None:
    """Planar three-landmark resection: solve, classify, verify, export."""


@main.command()
@_base_options
@click.option("--cos", "cosines", nargs=3, type=float, required=True,
              metavar="A1 A2 A3", help="Observed angle cosines.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
def solve(sides, angles, deg, cosines, as_json):
    """Recover all observer positions for one cosine triple."""
    base = _build_base(sides, angles, deg)
    a = _parse_triple(cosines)
    tol = _tolerances()
    f = pillow_value(a)
    if abs(f) > tol.surface:
        if as_json:
            click.echo(json.dumps({"on_surface": False, "pillow_value": f,
                                   "count": 0, "solutions": []}, sort_keys=True))
        else:
            click.echo(f"target is off the surface (constraint value {f:.3e}); "
                       "no observer reproduces these cosines")
        return
    try:
        result = solve_on_pillowcase(base, a, tol)
    except _DOMAIN_ERRORS as exc:
        raise click.ClickException(str(exc))
    if as_json:
        payload = {
            "on_surface": True,
            "kind": result.kind,
            "count": None if math.isinf(result.count) else int(result.count),
            "arc_vertex": result.arc_vertex,
            "note": result.note,
            "solutions": [
                {"distances": list(sol.distances),
                 "point": [sol.point.x, sol.point.y],
                 "residual": sol.residual}
                for sol in result.solutions
            ],
        }
        click.echo(json.dumps(payload, sort_keys=True))
        return
    _echo_base(base)
    if result.kind == "infinite_arc":
        click.echo(f"infinitely many observers: the open circumcircle arc "
                   f"opposite landmark {result.arc_vertex}")
        return
    click.echo(f"solutions: {int(result.count)}"
               + (f"  ({result.note})" if result.note else ""))
    for i, sol in enumerate(result.solutions, start=1):
        click.echo(f"  {i}: distances ({sol.s1:.9g}, {sol.s2:.9g}, "
                   f"{sol.s3:.9g})  position ({sol.point.x:.9g}, "
                   f"{sol.point.y:.9g})  residual {sol.residual:.2e}")


@main.command(name="classify")
@_base_options
@click.option("--cos", "cosines", nargs=3, type=float, required=True,
              metavar="A1 A2 A3", help="Observed angle cosines.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
def classify_cmd(sides, angles, deg, cosines, as_json):
    """Name the region of a cosine triple and predict its solution count."""
    base = _build_base(sides, angles, deg)
    a = _parse_triple(cosines)
    tol = _tolerances()
    try:
        label = classify(base, a, tol)
    except _DOMAIN_ERRORS as exc:
        raise click.ClickException(str(exc))
    try:
        pred = count_prediction(base, label, tol)
        count = pred.count
        provenance = pred.provenance
    except EmptyRegion as exc:
        count, provenance = 0.0, str(exc)
    if as_json:
        click.echo(json.dumps({
            "region": label.describe(),
            "kind": label.kind,
            "count": (None if count is None
                      else ("inf" if math.isinf(count) else int(count))),
            "provenance": provenance,
        }, sort_keys=True))
        return
    _echo_base(base)
    click.echo(f"region: {label.describe()}")
    if count is None:
        click.echo(f"predicted solutions: n/a ({provenance})")
    elif math.isinf(count):
        click.echo(f"predicted solutions: infinite ({provenance})")
    else:
        click.echo(f"predicted solutions: {int(count)} ({provenance})")


@main.command()
@_base_options
@click.option("--samples", type=int, default=200, show_default=True,
              help="Valid samples per octant.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
@click.pass_context
def verify(ctx, sides, angles, deg, samples, seed, as_json):
    """Cross-check classifier, solver, and brute-force counts by sampling."""
    base = _build_base(sides, angles, deg)
    tol = _tolerances()
    report = region_sweep(base, samples_per_octant=samples, seed=seed, tol=tol)
    if as_json:
        click.echo(json.dumps({
            "sides": list(report.sides),
            "seed": report.seed,
            "draws": report.draws,
            "mismatches": report.mismatch_count,
            "unobserved_octants": list(report.unobserved_octants),
            "rows": [
                {"region": r.region,
                 "predicted": (None if r.predicted is None
                               else ("inf" if math.isinf(r.predicted)
                                     else int(r.predicted))),
                 "samples": r.samples,
                 "solver_mismatches": r.solver_mismatches,
                 "oracle_mismatches": r.oracle_mismatches}
                for r in report.rows
            ],
        }, sort_keys=True))
    else:
        _echo_base(base)
        click.echo(report.table())
        click.echo(f"total mismatches: {report.mismatch_count}")
    if not report.ok:
        ctx.exit(3)


@main.command(name="lambda")
@_base_options
@click.option("--cos", "cosines", nargs=3, type=float, required=True,
              metavar="A1 A2 A3", help="Observed angle cosines.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
def lambda_cmd(sides, angles, deg, cosines, as_json):
    """Print the quartic coefficients for a cosine triple."""
    base = _build_base(sides, angles, deg)
    a = _parse_triple(cosines)
    coeffs = lambda_coeffs(base, a)
    values = coeffs.values()
    if as_json:
        click.echo(json.dumps({
            "coefficients": list(values),
            "magnitudes": list(coeffs.magnitudes()),
        }, sort_keys=True))
        return
    for k, v in enumerate(values):
        click.echo(f"lambda_{k} = {v:.17g}")


@main.command()
@_base_options
@click.option("--grid", type=int, default=64, show_default=True,
              help="Cells per chart axis.")
@click.option("--format", "fmt", type=click.Choice(["csv", "ply", "json"]),
              default="csv", show_default=True)
@click.option("--out", "path", required=True, type=click.Path(dir_okay=False),
              help="Output file.")
def figure(sides, angles, deg, grid, fmt, path):
    """Export the solution-count decomposition of the cosine surface."""
    base = _build_base(sides, angles, deg)
    tol = _tolerances()
    try:
        n = export_decomposition(base, grid, fmt, path, tol)
    except (InvalidGrid,) as exc:
        raise click.UsageError(str(exc))
    except IoFailure as exc:
        raise click.ClickException(str(exc))
    click.echo(f"wrote {n} samples to {path}")


if __name__ == "__main__":
    main()
