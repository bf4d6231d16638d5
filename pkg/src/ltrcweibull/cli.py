"""Command-line front end.

Every subcommand prints a human-readable report to standard output and can
write machine-readable CSV/JSON with --out. Each written output is paired
with a `<out>.manifest.json` recording the subcommand, input, and every
numeric setting, so any artifact can be regenerated exactly; stdout-only
runs append the manifest as a final line. All randomness flows from --seed
through named stream derivation, so reruns are byte-identical.
"""

import csv
import json
import sys

import click

from . import __version__
from . import bayes as bayes_mod
from . import bootstrap as bootstrap_mod
from . import mle_common, mle_separate, simstudy
from . import rng as rng_mod
from .data_model import bundled_transformer_path, parse_transformer_csv, to_dataset
from .errors import LtrcError
from .intervals import floor_at_zero

SCHEMA_VERSION = 1

_PARAM_SET_1 = (2.0, 0.0625, 0.04)
_PARAM_SET_2 = (0.5, 0.378, 0.408)
# Presets name the tables they reproduce; 5-8 are the Bayes views of the
# same four data configurations.
PRESETS = {
    "table1": (_PARAM_SET_1, 100),
    "table2": (_PARAM_SET_1, 200),
    "table3": (_PARAM_SET_2, 100),
    "table4": (_PARAM_SET_2, 200),
    "table5": (_PARAM_SET_1, 100),
    "table6": (_PARAM_SET_1, 200),
    "table7": (_PARAM_SET_2, 100),
    "table8": (_PARAM_SET_2, 200),
}
PRESET_TRUNCATION_FRACTIONS = (0.1, 0.3)


class RunManifest:
    """Reproducibility record written next to every output."""

    def __init__(self, subcommand, input_path, settings):
        self.payload = {
            "artifact_version": __version__,
            "schema_version": SCHEMA_VERSION,
            "subcommand": subcommand,
            "input": input_path,
            "settings": settings,
        }

    def to_json(self, indent=None):
        return json.dumps(self.payload, sort_keys=True, indent=indent)


def _emit_manifest(manifest, out):
    if out:
        with open(f"{out}.manifest.json", "w", encoding="utf-8") as fh:
            fh.write(manifest.to_json(indent=2) + "\n")
    else:
        click.echo("manifest: " + manifest.to_json())


def _load_dataset(input_path, scale, trunc_year, censor_year):
    path = input_path if input_path else bundled_transformer_path()
    records = parse_transformer_csv(path)
    return to_dataset(records, truncation_year=trunc_year,
                      censor_year=censor_year, scale=scale)


def _write_csv(path, fieldnames, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _fmt(value):
    return f"{value:.6g}"


def data_options(fn):
    fn = click.option(
        "--input", "input_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="CSV with sn,install_year,exit_year,nu,delta rows "
             "(default: bundled transformer data).",
    )(fn)
    fn = click.option("--scale", default=100.0, show_default=True,
                      help="Divide all times by this factor.")(fn)
    fn = click.option("--trunc-year", default=1980, show_default=True,
                      help="Left-truncation boundary year.")(fn)
    fn = click.option("--censor-year", default=2008, show_default=True,
                      help="Right-censoring year.")(fn)
    return fn


def _guard(fn):
    """Map package errors to a clean nonzero exit."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LtrcError as exc:
            raise click.ClickException(str(exc)) from exc

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@click.group()
@click.version_option(version=__version__)
def main():
    """Weibull competing-risks inference for left-truncated right-censored data."""


def _common_fit_lines(fit):
    return [
        f"  alpha    {_fmt(fit.alpha_hat)}",
        f"  lambda1  {_fmt(fit.lambda1_hat)}",
        f"  lambda2  {_fmt(fit.lambda2_hat)}",
        f"  loglik   {_fmt(fit.loglik)}",
        f"  converged: {'yes' if fit.converged else 'NO'} "
        f"({fit.iterations} iterations)",
        f"  unimodality certified: {'yes' if fit.unimodality_certified else 'NO'}",
    ]


def _fit_payload(fit):
    return {
        "alpha": fit.alpha_hat,
        "lambda1": fit.lambda1_hat,
        "lambda2": fit.lambda2_hat,
        "loglik": fit.loglik,
        "iterations": fit.iterations,
        "converged": fit.converged,
        "unimodality_certified": fit.unimodality_certified,
    }


def _separate_payload(fit):
    return {
        "alpha1": fit.alpha1_hat,
        "lambda1": fit.lambda1_hat,
        "alpha2": fit.alpha2_hat,
        "lambda2": fit.lambda2_hat,
        "loglik": fit.loglik,
        "iterations": [fit.iterations1, fit.iterations2],
        "converged": fit.converged1 and fit.converged2,
    }


@main.command()
@data_options
@click.option("--tol", default=1e-8, show_default=True)
@click.option("--separate", is_flag=True, help="Also fit per-cause shapes.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the fit as JSON here.")
@_guard
def fit(input_path, scale, trunc_year, censor_year, tol, separate, out):
    """Maximum likelihood fit of the competing-risks Weibull model."""
    dataset = _load_dataset(input_path, scale, trunc_year, censor_year)
    result = mle_common.solve_alpha(dataset, tol=tol)
    click.echo(f"common-shape fit (n={dataset.n}, m1={dataset.m1}, m2={dataset.m2})")
    for line in _common_fit_lines(result):
        click.echo(line)
    payload = {"schema_version": SCHEMA_VERSION, "common": _fit_payload(result)}
    ok = result.converged
    if separate:
        sep = mle_separate.fit_separate(dataset, tol=tol)
        click.echo("separate-shape fit")
        click.echo(f"  alpha1   {_fmt(sep.alpha1_hat)}")
        click.echo(f"  lambda1  {_fmt(sep.lambda1_hat)}")
        click.echo(f"  alpha2   {_fmt(sep.alpha2_hat)}")
        click.echo(f"  lambda2  {_fmt(sep.lambda2_hat)}")
        click.echo(f"  loglik   {_fmt(sep.loglik)}")
        payload["separate"] = _separate_payload(sep)
        ok = ok and sep.converged1 and sep.converged2
    if out:
        _write_json(out, payload)
    manifest = RunManifest("fit", input_path, {
        "scale": scale, "trunc_year": trunc_year, "censor_year": censor_year,
        "tol": tol, "separate": separate,
    })
    _emit_manifest(manifest, out)
    if not ok:
        click.echo("error: not all fits converged", err=True)
        sys.exit(1)


def _interval_rows(fit_values, dist, levels, floor):
    rows = []
    for name in dist.param_names:
        for level in levels:
            bc = bootstrap_mod.bc_interval(dist, fit_values[name], level, param=name)
            pct = bootstrap_mod.percentile_interval(dist, level, param=name)
            if floor:
                bc = floor_at_zero(bc)
                pct = floor_at_zero(pct)
            for ci in (bc, pct):
                rows.append({
                    "parameter": name, "level": level, "method": ci.method,
                    "lower": ci.lower, "upper": ci.upper,
                })
    return rows


@main.command()
@data_options
@click.option("--B", "B", default=1000, show_default=True,
              help="Number of bootstrap replicates.")
@click.option("--seed", default=0, show_default=True)
@click.option("--level", "levels", multiple=True, type=float, default=(0.9, 0.95),
              show_default=True, help="Confidence level(s); repeatable.")
@click.option("--tol", default=1e-8, show_default=True)
@click.option("--separate", is_flag=True, help="Bootstrap the separate-shape fit.")
@click.option("--floor-at-zero", "floor", is_flag=True,
              help="Clamp displayed interval bounds below at zero.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the interval table as CSV here.")
@_guard
def bootstrap(input_path, scale, trunc_year, censor_year, B, seed, levels, tol,
              separate, floor, out):
    """Parametric bootstrap confidence intervals."""
    dataset = _load_dataset(input_path, scale, trunc_year, censor_year)
    if separate:
        fitted = mle_separate.fit_separate(dataset, tol=tol)
        fit_values = {
            "alpha1": fitted.alpha1_hat, "lambda1": fitted.lambda1_hat,
            "alpha2": fitted.alpha2_hat, "lambda2": fitted.lambda2_hat,
        }
        ok = fitted.converged1 and fitted.converged2
    else:
        fitted = mle_common.solve_alpha(dataset, tol=tol)
        fit_values = {
            "alpha": fitted.alpha_hat, "lambda1": fitted.lambda1_hat,
            "lambda2": fitted.lambda2_hat,
        }
        ok = fitted.converged
    dist = bootstrap_mod.bootstrap_distribution(dataset, fitted, B, seed, tol=tol)
    if dist.failed_replicates:
        click.echo(f"note: {dist.failed_replicates} of {B} replicates failed "
                   "and were dropped", err=True)
    rows = _interval_rows(fit_values, dist, levels, floor)
    click.echo(f"bootstrap intervals (B={B}, seed={seed}, "
               f"failed={dist.failed_replicates})")
    click.echo("  parameter  level  method                lower      upper")
    for row in rows:
        click.echo(f"  {row['parameter']:<9}  {row['level']:<5g} "
                   f"{row['method']:<21} {_fmt(row['lower']):>9}  {_fmt(row['upper']):>9}")
    if out:
        _write_csv(out, ["parameter", "level", "method", "lower", "upper"],
                   [{**r, "lower": repr(r["lower"]), "upper": repr(r["upper"])}
                    for r in rows])
    manifest = RunManifest("bootstrap", input_path, {
        "scale": scale, "trunc_year": trunc_year, "censor_year": censor_year,
        "B": B, "seed": seed, "levels": list(levels), "tol": tol,
        "separate": separate, "floor_at_zero": floor,
    })
    _emit_manifest(manifest, out)
    if not ok:
        click.echo("error: the fit did not converge", err=True)
        sys.exit(1)


@main.command()
@data_options
@click.option("--N", "N", default=10_000, show_default=True,
              help="Number of posterior draws.")
@click.option("--seed", default=0, show_default=True)
@click.option("--level", "levels", multiple=True, type=float, default=(0.9, 0.95),
              show_default=True, help="Credibility level(s); repeatable.")
@click.option("--separate", is_flag=True, help="Sample the separate-shape posterior.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the posterior draws as CSV here.")
@click.option("--intervals-out", type=click.Path(dir_okay=False), default=None,
              help="Write the credible-interval table as CSV here.")
@_guard
def bayes(input_path, scale, trunc_year, censor_year, N, seed, levels, separate,
          out, intervals_out):
    """Posterior sampling, Bayes estimates, and credible intervals."""
    dataset = _load_dataset(input_path, scale, trunc_year, censor_year)
    if separate:
        draws = bayes_mod.sample_posterior_separate(dataset, N=N, seed=seed)
    else:
        draws = bayes_mod.sample_posterior(dataset, N=N, seed=seed)
    means = draws.draws.mean(axis=0)
    click.echo(f"posterior sample (N={N}, seed={seed})")
    int_rows = []
    for idx, name in enumerate(draws.param_names):
        click.echo(f"  {name:<8} mean {_fmt(float(means[idx]))}")
        col = draws.column(name)
        for level in levels:
            sym = bayes_mod.symmetric_interval(col, 1.0 - level)
            hpd = bayes_mod.hpd_interval(col, 1.0 - level)
            for ci in (sym, hpd):
                int_rows.append({
                    "parameter": name, "level": level, "method": ci.method,
                    "lower": ci.lower, "upper": ci.upper,
                })
                click.echo(f"    {int(level * 100)}% {ci.method:<14} "
                           f"({_fmt(ci.lower)}, {_fmt(ci.upper)})")
    if out:
        _write_csv(out, list(draws.param_names),
                   [{name: repr(float(v)) for name, v in zip(draws.param_names, row)}
                    for row in draws.draws])
    if intervals_out:
        _write_csv(intervals_out, ["parameter", "level", "method", "lower", "upper"],
                   [{**r, "lower": repr(r["lower"]), "upper": repr(r["upper"])}
                    for r in int_rows])
    manifest = RunManifest("bayes", input_path, {
        "scale": scale, "trunc_year": trunc_year, "censor_year": censor_year,
        "N": N, "seed": seed, "levels": list(levels), "separate": separate,
    })
    _emit_manifest(manifest, out)


@main.command()
@data_options
@click.option("--tol", default=1e-8, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the test result as JSON here.")
@_guard
def lrt(input_path, scale, trunc_year, censor_year, tol, out):
    """Likelihood-ratio test of equal shapes across the two causes."""
    dataset = _load_dataset(input_path, scale, trunc_year, censor_year)
    result = mle_separate.lrt_equal_shapes(dataset, tol=tol)
    decision = "reject" if result.reject else "fail to reject"
    click.echo(f"LRT statistic {_fmt(result.statistic)} vs chi-square(1) 95% "
               f"critical value {result.critical_value_95}: {decision} equal shapes")
    if out:
        _write_json(out, {
            "schema_version": SCHEMA_VERSION,
            "statistic": result.statistic,
            "critical_value_95": result.critical_value_95,
            "reject": result.reject,
        })
    manifest = RunManifest("lrt", input_path, {
        "scale": scale, "trunc_year": trunc_year, "censor_year": censor_year,
        "tol": tol,
    })
    _emit_manifest(manifest, out)


@main.command()
@data_options
@click.option("--points", default=512, show_default=True,
              help="Number of log-spaced grid points.")
@click.option("--prior-b", default=1e-4, show_default=True,
              help="Prior rate b0 entering the posterior discriminant.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the profile grid as CSV here.")
@_guard
def profile(input_path, scale, trunc_year, censor_year, points, prior_b, out):
    """Export profile log-likelihood and unimodality diagnostics on a grid."""
    dataset = _load_dataset(input_path, scale, trunc_year, censor_year)
    grid = mle_common.certificate_grid(num=points)
    p_values = mle_common.profile_grid_values(dataset, grid)
    d_values = [mle_common.d_alpha(dataset, a) for a in grid]
    dt_values = [bayes_mod.d_tilde_alpha(dataset, a, prior_b) for a in grid]
    best = int(max(range(len(grid)), key=lambda i: p_values[i]))
    click.echo(f"profile grid over [{grid[0]:g}, {grid[-1]:g}] "
               f"({points} points); argmax near alpha={_fmt(grid[best])}")
    click.echo(f"  d(alpha) nonnegative on grid: "
               f"{'yes' if min(d_values) >= 0 else 'NO'}")
    click.echo(f"  d_tilde(alpha) nonnegative on grid: "
               f"{'yes' if min(dt_values) >= 0 else 'NO'}")
    if out:
        _write_csv(out, ["alpha", "p_alpha", "d_alpha", "d_tilde_alpha"],
                   [{"alpha": repr(float(a)), "p_alpha": repr(float(p)),
                     "d_alpha": repr(float(d)), "d_tilde_alpha": repr(float(dt))}
                    for a, p, d, dt in zip(grid, p_values, d_values, dt_values)])
    manifest = RunManifest("profile", input_path, {
        "scale": scale, "trunc_year": trunc_year, "censor_year": censor_year,
        "points": points, "prior_b": prior_b,
    })
    _emit_manifest(manifest, out)


@main.command()
@click.option("--preset", type=click.Choice(sorted(PRESETS)), required=True,
              help="Which reported table's configuration to run.")
@click.option("--replications", default=200, show_default=True)
@click.option("--B", "B", default=1000, show_default=True)
@click.option("--N", "N", default=10_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--threads", default=None, type=int,
              help="Worker processes (default: LTRC_THREADS or all cores).")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write the aggregated metric rows as CSV here.")
@_guard
def simulate(preset, replications, B, N, seed, threads, out):
    """Monte Carlo study of estimator operating characteristics."""
    params, n = PRESETS[preset]
    all_rows = []
    for idx, frac in enumerate(PRESET_TRUNCATION_FRACTIONS):
        config = simstudy.SimConfig(
            n=n, truncation_fraction=frac, params=params,
            replications=replications, bootstrap_B=B, posterior_N=N,
            seed=rng_mod.subseed(seed, idx),
        )
        result = simstudy.run_study(config, threads=threads)
        click.echo(f"{preset}: n={n}, truncation {int(frac * 100)}%, "
                   f"{result.replications_used} replications used "
                   f"({result.failed_replications} failed), "
                   f"censored fraction {result.censored_fraction:.3f}")
        for (estimator, name), value in sorted(result.point_bias.items()):
            rmse = result.point_rmse[(estimator, name)]
            click.echo(f"  {estimator:<6} {name:<8} bias {value:+.4f}  rmse {rmse:.4f}")
        all_rows.extend(simstudy.to_rows(result))
    if out:
        _write_csv(out, ["param", "trunc", "metric", "nominal", "method", "value"],
                   [{**r, "value": repr(float(r["value"]))} for r in all_rows])
    manifest = RunManifest("simulate", None, {
        "preset": preset, "replications": replications, "B": B, "N": N,
        "seed": seed, "threads": threads,
    })
    _emit_manifest(manifest, out)


if __name__ == "__main__":
    main()
