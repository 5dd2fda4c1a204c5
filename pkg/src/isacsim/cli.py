"""Command-line entry point: ``isacsim validate | scnr-cdf | se-sweep``."""

from __future__ import annotations

import json
import logging
import sys

import click

from .experiments import (CDF_PRESET, SWEEP_KAPPA_R, SWEEP_KAPPA_T, SWEEP_M, load_config, run_scnr_cdf,
                          run_se_sweep, run_validation, write_csv)
from .errors import InputError
from .experiments.runner import draw_trial

AXIS_PRESETS = {"m": SWEEP_M, "kappa-t": SWEEP_KAPPA_T, "kappa-r": SWEEP_KAPPA_R}


def _common(f):
    opts = [
        click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
                     help="Flat key = value config file."),
        click.option("--seed", type=int),
        click.option("--trials", type=int),
        click.option("--out", type=click.Path(dir_okay=False), help="CSV output path (default: stdout)."),
        click.option("--methods", help="Comma-separated subset of: mmse, sca, power_alloc, "
                                       "sca_unaware, power_alloc_unaware."),
        click.option("--workers", type=int, help="Parallel worker processes."),
        click.option("--dump-scene", type=click.Path(dir_okay=False),
                     help="Write the trial-0 scene and user geometry as JSON."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _resolve(preset: dict, config_path, **flags):
    try:
        return load_config(config_path, base=preset, **flags)
    except (InputError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc


def _dump_scene(cfg, path):
    if not path:
        return
    scene, users = draw_trial(cfg, 0)
    users_d = users.to_dict()
    for key in ("H_real", "H_imag"):
        users_d.pop(key)
    with open(path, "w") as fh:
        json.dump({"seed": cfg.seed, "trial": 0, "num_antennas": cfg.num_antennas,
                   "scene": scene.to_dict(), "users": users_d}, fh, indent=2)


def _emit(text: str, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("-v", "--verbose", is_flag=True)
def main(verbose):
    """Hardware-distortion-aware ISAC precoding experiments."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_common
@click.option("--quick", is_flag=True, help="Fewer instances and samples.")
def validate(config_path, seed, trials, out, methods, workers, dump_scene, quick):
    """Run identity and Monte Carlo oracle checks; exit 1 on any failure."""
    cfg = _resolve({}, config_path, seed=seed, trials=trials, methods=methods, workers=workers)
    _dump_scene(cfg, dump_scene)
    checks = run_validation(cfg, quick=quick)
    text = "\n".join(c.line() for c in checks) + "\n"
    _emit(text, out)
    if out:
        click.echo(text, nl=False)
    sys.exit(0 if all(c.passed for c in checks) else 1)


@main.command("scnr-cdf")
@_common
@click.option("--rows-out", type=click.Path(dir_okay=False), help="Also write per-trial rows here.")
def scnr_cdf_cmd(config_path, seed, trials, out, methods, workers, dump_scene, rows_out):
    """Empirical CDF of achieved sensing SCNR per method."""
    from .experiments.csvio import to_csv
    cfg = _resolve(CDF_PRESET, config_path, seed=seed, trials=trials, methods=methods, workers=workers)
    _dump_scene(cfg, dump_scene)
    rows, points, counts = run_scnr_cdf(cfg)
    _emit(to_csv(points, cfg), out)
    if rows_out:
        write_csv(rows_out, rows, cfg)
    for (method, hardware), c in counts.items():
        click.echo(f"{method} [{hardware}]: {c['infeasible']}/{c['trials']} infeasible", err=True)


@main.command("se-sweep")
@_common
@click.option("--axis", type=click.Choice(sorted(AXIS_PRESETS)), required=True)
@click.option("--values", help="Comma-separated sweep values (ascending).")
@click.option("--rows-out", type=click.Path(dir_okay=False), help="Also write per-trial rows here.")
def se_sweep_cmd(config_path, seed, trials, out, methods, workers, dump_scene, axis, values, rows_out):
    """Average sum spectral efficiency versus M, kappa_t, or kappa_r."""
    from .experiments.csvio import to_csv
    cfg = _resolve(AXIS_PRESETS[axis], config_path, seed=seed, trials=trials, methods=methods,
                   workers=workers, sweep_values=values)
    _dump_scene(cfg, dump_scene)
    rows, summary = run_se_sweep(cfg)
    _emit(to_csv(summary, cfg), out)
    if rows_out:
        write_csv(rows_out, rows, cfg)


if __name__ == "__main__":
    main()
