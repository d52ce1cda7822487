"""Command line entry points."""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import dynamics
from . import leaf as leaf_mod
from . import verify as verify_mod
from .fields import CHART_UV, PhasePoint
from .leaf import LeafChart
from .so4 import ModelParams

_CSV_HEADER = "t,m12,m13,m14,m23,m24,m34,H0,C,HE,KE,zeta1"


def _floats(text: str, counts: tuple, what: str) -> list:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise click.UsageError(f"{what} expects comma-separated reals")
    if len(values) not in counts:
        wanted = " or ".join(str(c) for c in counts)
        raise click.UsageError(f"{what} expects {wanted} comma-separated reals")
    return values


def _params(mu_text: str) -> ModelParams:
    return ModelParams.from_mu(*_floats(mu_text, (3, 4), "--mu"))


def _complex_pair(text: str, what: str) -> complex:
    parts = _floats(text, (1, 2), what)
    return complex(parts[0], parts[1] if len(parts) == 2 else 0.0)


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _pair(z: complex) -> list:
    return [z.real, z.imag]


@click.group()
def main():
    """Bihamiltonian separation toolkit for the symmetric so(4) Euler top."""


@main.command(name="verify")
@click.option("--mu", "mu_text", required=True, help="mu1,mu2,mu3[,mu4]")
@click.option("--points", default=50, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--report", "report_path", default=None, type=click.Path(dir_okay=False))
@click.option("--tol-scale", default=1.0, show_default=True, type=float)
@click.option(
    "--override",
    "overrides",
    multiple=True,
    help="named single-sign mutation (q_sign, h2_sign, nstar_sign); repeatable",
)
@click.option("--threads", default=None, type=int, help="accepted for compatibility; execution is single process")
def verify_command(mu_text, points, seed, report_path, tol_scale, overrides, threads):
    """Run the identity suite over seeded random ensembles."""
    try:
        params = _params(mu_text)
        report = verify_mod.run_suite(
            params, seed=seed, n_points=points, overrides=tuple(overrides), tol_scale=tol_scale
        )
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    width = max(len(c.name) for c in report.checks)
    for c in report.checks:
        if c.skipped:
            click.echo(f"{c.name:<{width}}  {'':>12}  {'':>9}  skip  ({c.note})")
        else:
            status = "pass" if c.passed else "FAIL"
            click.echo(
                f"{c.name:<{width}}  {c.max_residual:12.3e}  {c.tolerance:9.1e}  {status}"
            )
    click.echo(f"overall: {'pass' if report.overall else 'FAIL'}")

    if report_path is not None:
        doc = report.to_dict()
        verify_mod.validate_report(doc)
        with open(report_path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        click.echo(f"report written to {report_path}")
    sys.exit(0 if report.overall else 1)


@main.command(name="integrate")
@click.option("--mu", "mu_text", required=True, help="mu1,mu2,mu3[,mu4]")
@click.option("--m0", "m0_text", required=True, help="m12,m13,m14,m23,m24,m34")
@click.option("--dt", default=1e-3, show_default=True, type=float)
@click.option("--t-end", default=10.0, show_default=True, type=float)
@click.option("--every", default=100, show_default=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False))
def integrate_command(mu_text, m0_text, dt, t_end, every, out_path):
    """Integrate the rigid body flow and track invariant drift."""
    try:
        params = _params(mu_text)
        m0 = np.array(_floats(m0_text, (6,), "--m0"))
        traj = dynamics.integrate(params, m0, dt=dt, t_end=t_end, record_every=every)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)

    lines = [_CSV_HEADER]
    for k, t in enumerate(traj.times):
        row = [repr(float(t))]
        row += [repr(float(x)) for x in traj.states[k]]
        row += [repr(float(traj.invariants[name][k])) for name in dynamics.INVARIANT_NAMES]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if out_path is None:
        click.echo(text, nl=False)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)

    drift = "  ".join(f"{name}={traj.drift[name]:.3e}" for name in dynamics.INVARIANT_NAMES)
    click.echo(f"max relative drift: {drift}")
    if traj.aborted:
        click.echo("error: integration aborted on non-finite state", err=True)
        sys.exit(1)
    sys.exit(0)


@main.command(name="dn")
@click.option("--mu", "mu_text", required=True, help="mu1,mu2,mu3[,mu4]")
@click.option(
    "--leaf",
    "leaf_text",
    required=True,
    help="u1re,u1im,z1re,z1im,u2re,u2im,z2re,z2im",
)
@click.option("--h0", "h0_text", required=True, help="re,im")
@click.option("--c2", "c2_text", required=True, help="re,im")
@click.option("--json", "as_json", is_flag=True, default=False)
def dn_command(mu_text, leaf_text, h0_text, c2_text, as_json):
    """Evaluate the Darboux coordinates on one symplectic leaf."""
    try:
        params = _params(mu_text)
        if not params.symmetric:
            raise ValueError("model not rotationally symmetric")
        vals = _floats(leaf_text, (8,), "--leaf")
        coords = np.array(
            [complex(vals[2 * i], vals[2 * i + 1]) for i in range(4)], dtype=complex
        )
        levels = (_complex_pair(h0_text, "--h0"), _complex_pair(c2_text, "--c2"))
        leaf = LeafChart(coords, levels)
        chart = leaf_mod.dn_chart(params, leaf)
        brackets = leaf_mod.dn_bracket_residuals(params, leaf)
        p_matrix = leaf_mod.dn_bracket_matrix(params, leaf, structure="P")
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    _, lam1, lam2 = leaf_mod.nijenhuis(params, leaf)
    canonical = leaf_mod.canonical_bracket_target(lam1, lam2, structure="P")
    residual = np.abs(p_matrix - canonical)

    if as_json:
        doc = {
            "schema": verify_mod.SCHEMA,
            "mu": list(params.mu),
            "zeta1": _pair(chart.zeta1),
            "xi1": _pair(chart.xi1),
            "lambda2": _pair(chart.lambda2),
            "xi2": _pair(chart.xi2),
            "p_bracket_max_residual": brackets["P"].normalized,
            "q_bracket_max_residual": brackets["Q"].normalized,
        }
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo(f"zeta1   = {_fmt_complex(chart.zeta1)}")
        click.echo(f"xi1     = {_fmt_complex(chart.xi1)}")
        click.echo(f"lambda2 = {_fmt_complex(chart.lambda2)}")
        click.echo(f"xi2     = {_fmt_complex(chart.xi2)}")
        click.echo("bracket residual vs canonical (structure P):")
        for row in residual:
            click.echo("  " + "  ".join(f"{x:9.3e}" for x in row))
    sys.exit(0)


@main.command(name="separation")
@click.option("--mu", "mu_text", required=True, help="mu1,mu2,mu3[,mu4]")
@click.option(
    "--uv",
    "uv_text",
    required=True,
    help="u1re,u1im,v1re,v1im,z1re,z1im,u2re,u2im,v2re,v2im,z2re,z2im",
)
def separation_command(mu_text, uv_text):
    """Evaluate both Jacobi separation relations at a uv-chart point."""
    try:
        params = _params(mu_text)
        vals = _floats(uv_text, (12,), "--uv")
        coords = np.array(
            [complex(vals[2 * i], vals[2 * i + 1]) for i in range(6)], dtype=complex
        )
        pt = PhasePoint(CHART_UV, coords)
        r1 = leaf_mod.phi1_residual(params, pt)
        r2 = leaf_mod.phi2_residual(params, pt)
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except RuntimeError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    click.echo(f"phi1: residual={r1.raw:.6e}  normalized={r1.normalized:.6e}")
    click.echo(f"phi2: residual={r2.raw:.6e}  normalized={r2.normalized:.6e}")
    sys.exit(0)


if __name__ == "__main__":
    main()
