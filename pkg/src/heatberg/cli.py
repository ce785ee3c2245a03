"""Batch front end: verification suites, transform sampling, weight tables.

Outputs land in the chosen directory: ``report.json`` (the canonical record),
``report.csv`` and ``report.txt`` for reading, and ``report.svg`` with the
per-identity error chart.  Exit codes: 0 all identities pass, 1 at least one
failure, 2 configuration error.
"""

from __future__ import annotations

import configparser
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from . import frac_sobolev, hermite, plots, segal_bargmann
from .group_spectra import SpectralCoefficients, synthesize
from .reports import reports_to_csv, reports_to_json, reports_to_table
from .suites import SUITES, RunConfig, run_suites

_SUITE_CHOICES = sorted(SUITES) + ["all"]


def _parse_floats(text: str) -> tuple:
    return tuple(float(x) for x in text.split(",") if x.strip())


def load_config(path: str) -> RunConfig:
    """Flat key=value sections: [run], [params], [grid], [output]."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ValueError(f"config file {path!r} not found")
    cfg = RunConfig()
    if parser.has_section("run"):
        run = parser["run"]
        cfg = replace(
            cfg,
            group=run.get("group", cfg.group),
            cutoff=run.getint("cutoff", cfg.cutoff),
            seed=run.getint("seed", cfg.seed),
            tol=run.getfloat("tol", cfg.tol),
            scaling=run.get("scaling", cfg.scaling),
            n_funcs=run.getint("n_funcs", cfg.n_funcs),
        )
    if parser.has_section("params"):
        par = parser["params"]
        cfg = replace(
            cfg,
            t_values=_parse_floats(par.get("t", "")) or cfg.t_values,
            s_values=_parse_floats(par.get("s", "")) or cfg.s_values,
            gamma_values=_parse_floats(par.get("gamma", "")) or cfg.gamma_values,
        )
    if parser.has_section("grid"):
        grid = parser["grid"]
        cfg = replace(
            cfg,
            grid_m=grid.getint("m", cfg.grid_m),
            y_radius=grid.getfloat("y_radius", cfg.y_radius),
        )
    if parser.has_section("output"):
        cfg = replace(cfg, out_dir=parser["output"].get("dir", cfg.out_dir))
    return cfg


def _build_config(config, **flags) -> RunConfig:
    cfg = load_config(config) if config else RunConfig()
    updates = {}
    for key in ("group", "cutoff", "seed", "scaling", "n_funcs"):
        if flags.get(key) is not None:
            updates[key] = flags[key]
    if flags.get("tol") is not None:
        updates["tol"] = flags["tol"]
    if flags.get("t") is not None:
        updates["t_values"] = _parse_floats(flags["t"])
    if flags.get("s") is not None:
        updates["s_values"] = _parse_floats(flags["s"])
    if flags.get("gamma") is not None:
        updates["gamma_values"] = _parse_floats(flags["gamma"])
    if flags.get("out") is not None:
        updates["out_dir"] = flags["out"]
    return replace(cfg, **updates)


@click.group()
def main():
    """Heat-kernel transforms, Bergman weights, and their identity checks."""


@main.command()
@click.option("--suite", default="all", type=click.Choice(_SUITE_CHOICES),
              help="Which verification suite to run.")
@click.option("--group", default=None, help="Spectral group, e.g. torus-1 or su2.")
@click.option("--t", default=None, help="Comma-separated diffusion times.")
@click.option("--s", default=None, help="Comma-separated Sobolev orders.")
@click.option("--gamma", default=None, help="Comma-separated fractional windows.")
@click.option("--cutoff", default=None, type=int, help="Spectral cutoff N.")
@click.option("--tol", default=None, type=float, help="Override identity tolerances.")
@click.option("--seed", default=None, type=int, help="Seed for test functions.")
@click.option("--scaling", default=None, type=click.Choice(["unit", "half"]),
              help="Generator scaling for the generalized transform.")
@click.option("--n-funcs", default=None, type=int, help="Random test functions per check.")
@click.option("--config", default=None, type=click.Path(), help="INI config file.")
@click.option("--out", default=None, type=click.Path(), help="Output directory.")
def verify(suite, config, out, **flags):
    """Run a verification suite and write JSON/CSV/table/SVG reports."""
    try:
        cfg = _build_config(config, out=out, **flags)
    except (ValueError, configparser.Error) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)

    reports = run_suites(suite, cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(reports_to_json(reports))
    (out_dir / "report.csv").write_text(reports_to_csv(reports))
    table = reports_to_table(reports)
    (out_dir / "report.txt").write_text(table)
    plots.report_plot(reports, out_dir / "report.svg")

    click.echo(table, nl=False)
    failed = [r for r in reports if not r.passed]
    click.echo(f"{len(reports) - len(failed)}/{len(reports)} identities passed; "
               f"reports in {out_dir}")
    if failed:
        for r in failed:
            click.echo(f"FAILED: {r.id} (rel_err {r.rel_err:.3e} vs tol {r.tol:g})",
                       err=True)
        sys.exit(1)


@main.command()
@click.option("--kind", required=True, type=click.Choice(["ct", "cts", "tt", "tts"]))
@click.option("--input", "input_path", required=True, type=click.Path(exists=True),
              help="Coefficient CSV (label,re,im) or expansion CSV (alpha,re,im).")
@click.option("--group", default="torus-1", help="Group for ct/cts input.")
@click.option("--t", default=0.5, type=float)
@click.option("--s", default=1.0, type=float, help="Order for cts/tts.")
@click.option("--scaling", default="half", type=click.Choice(["unit", "half"]))
@click.option("--nx", default=64, type=int)
@click.option("--ny", default=33, type=int)
@click.option("--ymax", default=1.0, type=float, help="Imaginary range half-width.")
@click.option("--ximax", default=6.0, type=float, help="Real range half-width (Hermite).")
@click.option("--tol", default=1e-9, type=float, help="Tail-warning threshold.")
@click.option("--out", required=True, type=click.Path())
def transform(kind, input_path, group, t, s, scaling, nx, ny, ymax, ximax, tol, out):
    """Sample a transformed function on a complexified grid and write CSV."""
    rows = []
    if kind in ("ct", "cts"):
        c = SpectralCoefficients.load_csv(input_path, group)
        moved = segal_bargmann.ct_transform(c, t) if kind == "ct" \
            else frac_sobolev.cts_transform(c, t, s, scaling)
        xs = 2.0 * math.pi * np.arange(nx) / nx
        ys = np.linspace(-ymax, ymax, ny)
        header = ["x", "y", "re", "im", "tail_bound"]
        for y in ys:
            res = synthesize(moved, xs + 1j * y, tol=tol)
            for x, val in zip(xs, res.values):
                rows.append([x, y, val.real, val.imag, res.tail_bound])
    else:
        e = hermite.HermiteExpansion.load_csv(input_path)
        moved = hermite.tt_transform(e, t) if kind == "tt" \
            else hermite.tts_transform(e, t, s)
        xis = np.linspace(-ximax, ximax, nx)
        vs = np.linspace(-ymax, ymax, ny)
        header = ["xi", "v", "re", "im", "tail_bound"]
        for v in vs:
            vals = hermite.synthesize_hermite(moved, xis + 1j * v)
            for xi, val in zip(xis, vals):
                rows.append([xi, v, val.real, val.imag, 0.0])
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    click.echo(f"wrote {len(rows)} samples to {out}")


@main.command()
@click.option("--which", required=True, type=click.Choice(["nu", "w", "U", "Ugamma"]))
@click.option("--t", default=0.5, type=float)
@click.option("--gamma", default=None, type=float, help="Required for w/Ugamma.")
@click.option("--ymin", default=-3.0, type=float)
@click.option("--ymax", default=3.0, type=float)
@click.option("--n", "npts", default=121, type=int)
@click.option("--xi", default=0.0, type=float, help="Fixed real part for U slices.")
@click.option("--compare-nu", is_flag=True, help="Add the Gaussian weight column.")
@click.option("--plot", "do_plot", is_flag=True, help="Also write an SVG plot.")
@click.option("--out", required=True, type=click.Path(),
              help="Output CSV path; the SVG sits next to it.")
def weights(which, t, gamma, ymin, ymax, npts, xi, compare_nu, do_plot, out):
    """Tabulate a weight on a 1-d slice (CSV y,value; optional SVG)."""
    if which in ("w", "Ugamma") and (gamma is None or gamma <= 0):
        click.echo("a positive --gamma is required for w/Ugamma", err=True)
        sys.exit(2)
    ys = np.linspace(ymin, ymax, npts)
    if which == "nu":
        vals = segal_bargmann.nu_t(ys, t)
    elif which == "w":
        vals = segal_bargmann.w_t_gamma(ys, t, gamma)
    elif which == "U":
        vals = hermite.u_t(xi + 1j * ys, t)
    else:
        vals = hermite.u_t_gamma(xi + 1j * ys, t, gamma)
    curves = {which: np.asarray(vals)}
    if compare_nu:
        curves["nu"] = segal_bargmann.nu_t(ys, t)
    with open(out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["y"] + list(curves))
        for i, y in enumerate(ys):
            w.writerow([y] + [curves[k][i] for k in curves])
    if do_plot:
        svg = Path(out).with_suffix(".svg")
        plots.weight_plot(ys, curves, svg, title=f"{which} (t={t})")
        click.echo(f"wrote {out} and {svg}")
    else:
        click.echo(f"wrote {out}")


if __name__ == "__main__":
    main()
