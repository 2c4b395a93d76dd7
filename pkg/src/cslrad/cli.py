"""Command-line interface.

    cslrad spectrum --config run.json [--plot]
    cslrad bound    --config run.json --limit NAME
    cslrad verify   [--json report.json]
    cslrad sweep    --config run.json --axis lambda=1e-18:1e-10:25:log [--axis ...]

Exit codes: 0 ok, 1 configuration error, 2 numerical failure, 3 verification
failure.  ``CSLRAD_THREADS`` caps the number of worker threads.
"""
from __future__ import annotations

import dataclasses
import io
import itertools
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import __version__
from .bounds import bound_rescale_rc, get_limit, lambda_bound
from .config import (ColoredNoiseModel, RunConfig, build_constants, build_correlation,
                     build_noise, evaluate_point, load_config, rate_per_lambda_fn)
from .errors import ConfigError, CslradError, DomainError
from .noise import WhiteNoise, effective_gamma, gamma_from_lambda
from .plot import render_loglog
from .units import CONSTANTS_VERSION, KEV, LAMBDA_STANDARD, energy_to_momentum
from .verify import run_checks

EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 1, 2, 3
CSV_HEADER = "E_keV,p_inv_cm,dGamma_dp_s_inv_cm,structure_factor,dPower_dp_erg_s_inv_cm"
SWEEP_AXES = ("lambda", "r_c", "E")


def thread_count():
    raw = os.environ.get("CSLRAD_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return min(8, os.cpu_count() or 1)


def parallel_map(fn, items, threads=None):
    """Ordered map over a thread pool; results come back in input order."""
    items = list(items)
    threads = threads or thread_count()
    if threads == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _fmt(x):
    return repr(float(x))


def compute_spectrum(cfg: RunConfig, threads=None):
    """Evaluate the configured grid.  Returns (points, sorted warning messages)."""
    constants = build_constants(cfg)
    energies = cfg.grid.energies()
    momenta = [energy_to_momentum(float(E), constants) for E in energies]

    def point(p):
        rate, structure = evaluate_point(cfg, p)
        return {
            "E_keV": p * constants.hbar_c / KEV,
            "p_inv_cm": p,
            "dGamma_dp_s_inv_cm": rate,
            "structure_factor": structure,
            "dPower_dp_erg_s_inv_cm": constants.hbar_c * p * rate,
        }

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        points = parallel_map(point, momenta, threads)
    notes = sorted({str(w.message) for w in caught})
    points.sort(key=lambda pt: pt["p_inv_cm"])
    return points, notes


def metadata(cfg: RunConfig):
    return {"version": __version__, "constants": CONSTANTS_VERSION,
            "config_sha256": cfg.digest()}


def format_csv(cfg, points, notes):
    meta = metadata(cfg)
    buf = io.StringIO()
    buf.write(f"# cslrad {meta['version']} constants={meta['constants']} "
              f"config_sha256={meta['config_sha256']}\n")
    for note in notes:
        buf.write(f"# warning: {note}\n")
    buf.write(CSV_HEADER + "\n")
    for pt in points:
        buf.write(",".join(_fmt(pt[key]) for key in CSV_HEADER.split(",")) + "\n")
    return buf.getvalue()


def format_json(cfg, points, notes):
    doc = {"metadata": {**metadata(cfg), "config": cfg.model_dump(mode="json"),
                        "warnings": notes},
           "points": [{k: float(v) for k, v in pt.items()} for pt in points]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _write(text, path):
    if path is None:
        click.echo(text, nl=False)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _svg_path(path):
    if path is None:
        return "spectrum.svg"
    root, _ = os.path.splitext(path)
    return root + ".svg"


def _load(config_path):
    try:
        return load_config(config_path)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(str(exc), path="config") from None


@click.group()
@click.version_option(__version__, prog_name="cslrad")
def cli():
    """CSL noise-induced photon emission rates and lambda bounds."""


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--plot", is_flag=True, help="Also write a log-log SVG plot.")
def spectrum(config_path, plot):
    """Compute dGamma/dp on the configured photon-energy grid."""
    cfg = _load(config_path)
    points, notes = compute_spectrum(cfg)
    text = (format_json if cfg.output.format == "json" else format_csv)(cfg, points, notes)
    _write(text, cfg.output.path)
    for note in notes:
        click.echo(f"warning: {note}", err=True)
    if plot or cfg.output.plot:
        svg = render_loglog([pt["E_keV"] for pt in points],
                            [pt["dGamma_dp_s_inv_cm"] for pt in points],
                            title=f"{cfg.system.type} spectrum")
        _write(svg, _svg_path(cfg.output.path))


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--limit", "limit_name", required=True)
def bound(config_path, limit_name):
    """Upper bound on lambda from a bundled experimental limit."""
    cfg = _load(config_path)
    try:
        limit = get_limit(limit_name)
    except KeyError as exc:
        raise ConfigError(exc.args[0], path="--limit") from None
    corr = build_correlation(cfg.correlation)
    constants = build_constants(cfg)
    click.echo(f"limit: {limit.name} at {limit.E_photon:g} keV, dGamma/dp < "
               f"{limit.rate_limit:.6g} s^-1 cm")
    if limit.stated_lambda_bound is not None:
        click.echo(f"stated bound for this entry: lambda < {limit.stated_lambda_bound:.3g} s^-1")

    if isinstance(cfg.noise, ColoredNoiseModel):
        p = energy_to_momentum(limit.E_photon, constants)
        weight = effective_gamma(build_noise(cfg.noise), constants.c * p, corr)
        if weight == 0:
            click.echo("no constraint: the noise spectrum vanishes at the photon frequency")
            return
    result = lambda_bound(limit, rate_per_lambda_fn(cfg), corr.r_c, constants=constants)
    if not result.constrained:
        click.echo("no constraint: the model predicts no emission at this energy")
        return
    rescaled = bound_rescale_rc(result.lambda_max, corr.r_c, 1e-4)
    click.echo(f"lambda_max = {result.lambda_max:.6g} s^-1 (r_c = {corr.r_c:g} cm)")
    click.echo(f"ratio to standard lambda {LAMBDA_STANDARD:g} s^-1 = "
               f"{result.ratio_to_standard:.4g}")
    click.echo(f"rescaled to r_c = 1e-4 cm: lambda_max = {rescaled:.6g} s^-1 "
               f"(x{rescaled / result.lambda_max:.6g})")
    if isinstance(cfg.noise, ColoredNoiseModel):
        click.echo(f"colored noise: requires gamma(omega_p) <= "
                   f"{gamma_from_lambda(result.lambda_max, corr.r_c):.6g} cm^3 s^-1")


@cli.command()
@click.option("--json", "json_path", type=click.Path(dir_okay=False), default=None)
def verify(json_path):
    """Run every oracle comparison; exit 3 if any fails."""
    report = run_checks()
    for entry in report:
        status = "PASS" if entry["passed"] else "FAIL"
        extra = entry.get("error") or (f"achieved={entry['achieved']:.3g} "
                                       f"tol={entry['tolerance']:.3g}")
        click.echo(f"{status} {entry['name']}: {extra} ({entry['seconds']}s)")
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            json.dump({"version": __version__, "checks": report}, fh, indent=2)
    if not all(entry["passed"] for entry in report):
        sys.exit(EXIT_VERIFY)


def parse_axis(spec):
    """'name=start:stop:n[:linear|log]' -> (name, values)."""
    try:
        name, rng = spec.split("=", 1)
        parts = rng.split(":")
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
        spacing = parts[3] if len(parts) > 3 else "log"
    except (ValueError, IndexError):
        raise ConfigError(f"malformed axis {spec!r}; expected name=start:stop:n[:spacing]",
                          path="--axis") from None
    if name not in SWEEP_AXES:
        raise ConfigError(f"unknown axis {name!r}; choose from {', '.join(SWEEP_AXES)}",
                          path="--axis")
    if n < 1:
        raise ConfigError("an axis needs at least one point", path=f"--axis {name}")
    if spacing not in ("linear", "log") or len(parts) > 4:
        raise ConfigError(f"bad spacing in {spec!r}", path=f"--axis {name}")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError("log axes need positive bounds", path=f"--axis {name}")
        values = np.geomspace(start, stop, n)
    else:
        values = np.linspace(start, stop, n)
    return name, sorted(float(v) for v in values)


def compute_sweep(cfg: RunConfig, axes, energy=None, limit=None, threads=None):
    """Rows (as dicts) over the product of the sweep axes, in lexicographic order."""
    if not 1 <= len(axes) <= 2:
        raise ConfigError("a sweep takes one or two axes", path="--axis")
    names = [name for name, _ in axes]
    if len(set(names)) != len(names):
        raise ConfigError("duplicate sweep axis", path="--axis")
    if limit is not None and "lambda" in names:
        raise ConfigError("a bound sweep cannot vary lambda", path="--axis")
    constants = build_constants(cfg)
    base_noise = build_noise(cfg.noise)
    base_corr = build_correlation(cfg.correlation)
    default_E = energy if energy is not None else cfg.grid.E_min_keV

    def row(values):
        params = dict(zip(names, values))
        corr = dataclasses.replace(base_corr, r_c=params.get("r_c", base_corr.r_c))
        E = limit.E_photon if limit is not None else params.get("E", default_E)
        out = {"lambda_s_inv": params.get("lambda"), "r_c_cm": corr.r_c, "E_keV": E}
        if limit is not None:
            res = lambda_bound(limit, rate_per_lambda_fn(cfg), corr.r_c, constants=constants)
            out["lambda_max_s_inv"] = res.lambda_max
            return out
        noise = WhiteNoise(params["lambda"]) if "lambda" in params else base_noise
        out["dGamma_dp_s_inv_cm"] = evaluate_point(
            cfg, energy_to_momentum(E, constants), noise, corr)[0]
        return out

    grid = list(itertools.product(*[vals for _, vals in axes]))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return parallel_map(row, grid, threads)


def format_sweep(cfg, rows):
    columns = [c for c in ("lambda_s_inv", "r_c_cm", "E_keV", "dGamma_dp_s_inv_cm",
                           "lambda_max_s_inv") if any(r.get(c) is not None for r in rows)]
    lines = [f"# cslrad {__version__} constants={CONSTANTS_VERSION} "
             f"config_sha256={cfg.digest()}", ",".join(columns)]
    lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--axis", "axes", multiple=True, required=True,
              help="name=start:stop:n[:linear|log] with name in lambda, r_c, E.")
@click.option("--energy", type=float, default=None,
              help="Photon energy in keV when E is not swept (default: grid E_min).")
@click.option("--limit", "limit_name", default=None, help="Sweep lambda bounds instead of rates.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None)
def sweep(config_path, axes, energy, limit_name, out_path):
    """Grid of rates (or bounds) over one or two parameter axes."""
    cfg = _load(config_path)
    if len(axes) > 2:
        raise ConfigError("a sweep takes at most two axes", path="--axis")
    parsed = [parse_axis(a) for a in axes]
    limit = None
    if limit_name is not None:
        try:
            limit = get_limit(limit_name)
        except KeyError as exc:
            raise ConfigError(exc.args[0], path="--limit") from None
    rows = compute_sweep(cfg, parsed, energy=energy, limit=limit)
    _write(format_sweep(cfg, rows), out_path or cfg.output.path)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="cslrad", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except click.exceptions.Abort:
        return EXIT_CONFIG
    except (ConfigError, KeyError) as exc:
        click.echo(f"config error: {exc}", err=True)
        return EXIT_CONFIG
    except (CslradError, DomainError, ArithmeticError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return EXIT_NUMERIC
    except SystemExit as exc:
        return exc.code
    return 0


if __name__ == "__main__":
    sys.exit(main())
