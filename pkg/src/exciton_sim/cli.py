"""Command-line entry point: scenario presets, validation, CSV/JSON artifacts.

A run resolves one scenario into a parameter set, computes one curve per
cavity amplitude (or per disorder width for the transparency-minimum
scenario), writes one delimited data file per curve plus a JSON sidecar with
the fully resolved parameters, and renders a figure per scenario unless
plotting is disabled. Identical configs and seeds produce byte-identical
data files.

Exit codes: 0 success, 2 config error, 3 numeric or convergence error,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import string
import sys
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__, plotting
from .cavity_response import CavityDrive, ProbeGrid, sweep_spectrum
from .dimer_eit import (
    DimerParams,
    a_min_gaussian_mc,
    a_min_homogeneous,
    chi_dimer,
    dimer_eigens,
)
from .disorder_ensemble import DisorderModel, average_spectra
from .errors import ConfigError, InputError, NumericError
from .exciton_model import AggregateSpec, build_basis
from .scenarios import (
    SCENARIOS,
    Resolved,
    bright_pair_cavity_frequency,
    parse_overrides,
    resolve,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

WORKERS_ENV = "EXCITON_SIM_WORKERS"

CSV_HEADER = "omega_p_meV,delta_over_gamma,re_chi,im_chi"
AMIN_HEADER = "a_c,a_min,a_min_normalized,stderr_a_min"

_CONFIG_FILE_KEYS = ("scenario", "seed", "workers", "format", "out", "plot")


@dataclass
class RunConfig:
    """One resolved CLI invocation."""

    scenario: str
    overrides: dict = field(default_factory=dict)
    seed: int = 0
    workers: int = 1
    output_path: str = "."
    format: str = "csv"
    plot: bool = True

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _curve_label(index: int) -> str:
    letters = string.ascii_lowercase
    return letters[index] if index < len(letters) else f"c{index}"


def _spec_from(params: dict) -> AggregateSpec:
    return AggregateSpec(
        n_sites=params["n_sites"],
        omega_e=params["omega_e"],
        j_nn=params["j_nn"],
        u_nn=params["u_nn"],
        coupling_range=params["coupling_range"],
        gamma=params["gamma"],
        mu_eg=params["mu_eg"],
    )


def _scalar_sigma(resolved: Resolved) -> float:
    sigma = resolved.params["sigma"]
    if isinstance(sigma, list):
        if len(sigma) != 1:
            raise ConfigError(
                "a sigma list is only valid for fig4c; pass a single value"
            )
        return sigma[0]
    return sigma


def _derived_frequencies(resolved: Resolved) -> dict:
    """Reference and cavity frequencies implied by the resolved parameters."""
    p = resolved.params
    if resolved.kind == "aggregate":
        basis = build_basis(_spec_from(p))
        omega_ref = float(basis.omega_k[0])
        omega_c = p["omega_c"]
        if omega_c == "auto":
            omega_c = bright_pair_cavity_frequency(basis)
        return {"omega_ref": omega_ref, "omega_c_resolved": float(omega_c)}
    eig = dimer_eigens(
        DimerParams(
            eps1=p["omega_e"], eps2=p["omega_e"], j12=p["j_nn"], u12=p["u_nn"],
            gamma1=p["gamma"], gamma12=p["gamma2"],
        )
    )
    omega_c = p["omega_c"]
    if omega_c == "auto":
        omega_c = eig.omega_two - eig.omega_plus
    return {
        "omega_ref": eig.omega_plus,
        "omega_c_resolved": float(omega_c),
        "mu_plus": eig.mu_plus,
    }


def validate(config: RunConfig) -> dict:
    """Resolve the run without executing it and return the parameter echo."""
    resolved = resolve(config.scenario, config.overrides)
    echo = resolved.echo()
    echo["derived"] = _derived_frequencies(resolved)
    echo["seed"] = config.seed
    echo["workers"] = config.workers
    echo["format"] = config.format
    echo["output_path"] = config.output_path
    return echo


def _write_columns(path: Path, header: str, columns: list, fmt: str) -> None:
    names = header.split(",")
    if fmt == "csv":
        lines = [header]
        for row in zip(*columns):
            lines.append(",".join(_fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        payload = {name: [float(v) for v in col] for name, col in zip(names, columns)}
        path.write_text(json.dumps(payload) + "\n", encoding="utf-8")


def _write_spectrum(path, omega_p, chi, omega_ref, gamma, fmt) -> None:
    delta = (omega_p - omega_ref) / gamma
    _write_columns(path, CSV_HEADER, [omega_p, delta, chi.real, chi.imag], fmt)


def _run_aggregate(resolved: Resolved, config: RunConfig, derived: dict):
    p = resolved.params
    spec = _spec_from(p)
    basis = build_basis(spec)
    omega_ref = derived["omega_ref"]
    omega_c = derived["omega_c_resolved"]
    span = p["grid_span_gamma"] * p["gamma"]
    grid = ProbeGrid(np.linspace(omega_ref - span, omega_ref + span, p["grid_points"]))
    sigma = _scalar_sigma(resolved)

    curves = []
    for i, a_c in enumerate(p["a_c"]):
        drive = CavityDrive(omega_c=omega_c, a_c=a_c, omega_rabi=p["omega_rabi"])
        if sigma == 0.0:
            result = sweep_spectrum(
                basis, drive, grid, p["gamma"], p["gamma2"], workers=config.workers
            )
        else:
            model = DisorderModel(
                sigma=sigma, n_realizations=p["n_realizations"], seed=config.seed
            )
            result = average_spectra(
                spec, drive, grid, model, p["gamma"], p["gamma2"],
                workers=config.workers,
            )
        curves.append((_curve_label(i), {"a_c": a_c}, grid.omega_p, result.chi))
    return curves


def _dimer_base(resolved: Resolved, derived: dict) -> DimerParams:
    p = resolved.params
    return DimerParams(
        eps1=p["omega_e"], eps2=p["omega_e"], j12=p["j_nn"], u12=p["u_nn"],
        gamma1=p["gamma"], gamma12=p["gamma2"],
        d12=p["omega_rabi"] * derived["mu_plus"],
        a_c=0.0,
        mu1=p["mu_eg"] * derived["mu_plus"],
    )


def _run_dimer_spectrum(resolved: Resolved, config: RunConfig, derived: dict):
    p = resolved.params
    if _scalar_sigma(resolved) != 0.0:
        raise ConfigError(
            "fig4ab computes the closed-form dimer spectrum; site disorder only "
            "enters the transparency-minimum scenario (fig4c)"
        )
    base = _dimer_base(resolved, derived)
    eig = dimer_eigens(base)
    omega_ref = derived["omega_ref"]
    delta_c = derived["omega_c_resolved"] - (eig.omega_two - eig.omega_plus)
    span = p["grid_span_gamma"] * p["gamma"]
    omega_p = np.linspace(omega_ref - span, omega_ref + span, p["grid_points"])

    curves = []
    for i, a_c in enumerate(p["a_c"]):
        chi = chi_dimer(omega_p - omega_ref, delta_c, replace(base, a_c=a_c))
        curves.append((_curve_label(i), {"a_c": a_c}, omega_p, chi))
    return curves


def _run_dimer_amin(resolved: Resolved, config: RunConfig, derived: dict):
    p = resolved.params
    base = _dimer_base(resolved, derived)
    a_c_grid = np.linspace(0.0, p["a_c_max"], p["a_c_points"])

    curves = []
    for i, sigma in enumerate(p["sigma"]):
        amin = np.empty_like(a_c_grid)
        stderr = np.zeros_like(a_c_grid)
        for j, a_c in enumerate(a_c_grid):
            point = replace(base, a_c=a_c)
            if sigma == 0.0:
                amin[j] = a_min_homogeneous(point)
            else:
                amin[j], stderr[j] = a_min_gaussian_mc(
                    point, sigma, p["n_realizations"], config.seed
                )
        normalized = amin / amin[0]
        curves.append((_curve_label(i), {"sigma": sigma}, a_c_grid,
                       (amin, normalized, stderr)))
    return curves


def run(config: RunConfig) -> dict:
    """Execute a run and write all artifact files; returns the sidecar content."""
    resolved = resolve(config.scenario, config.overrides)
    derived = _derived_frequencies(resolved)
    out_dir = Path(config.output_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()

    if resolved.kind == "aggregate":
        curves = _run_aggregate(resolved, config, derived)
    elif resolved.kind == "dimer_spectrum":
        curves = _run_dimer_spectrum(resolved, config, derived)
    else:
        curves = _run_dimer_amin(resolved, config, derived)

    gamma = resolved.params["gamma"]
    ext = config.format
    files = {}
    curve_info = {}
    for label, info, x, data in curves:
        path = out_dir / f"{config.scenario}_{label}.{ext}"
        if resolved.kind == "dimer_amin":
            amin, normalized, stderr = data
            _write_columns(path, AMIN_HEADER, [x, amin, normalized, stderr], ext)
        else:
            _write_spectrum(path, x, data, derived["omega_ref"], gamma, ext)
        files[label] = path.name
        curve_info[label] = info
        print(f"wrote {path}")

    figures = []
    if config.plot:
        fig_path = out_dir / f"{config.scenario}.png"
        title = f"{config.scenario} (N={resolved.params['n_sites']})"
        if resolved.kind == "dimer_amin":
            amin_curves = [
                (f"sigma={info['sigma']:.3g} meV", x, data[1])
                for _, info, x, data in curves
            ]
            plotting.render_amin(fig_path, amin_curves, title)
        else:
            spectra = [
                (f"A_c={info['a_c']:g}", (x - derived["omega_ref"]) / gamma, data)
                for _, info, x, data in curves
            ]
            render = (
                plotting.render_dimer_spectra
                if resolved.kind == "dimer_spectrum"
                else plotting.render_spectra
            )
            render(fig_path, spectra, title)
        figures.append(fig_path.name)
        print(f"wrote {fig_path}")

    sidecar = {
        "config": {
            "scenario": config.scenario,
            "overrides": parse_overrides(config.overrides),
            "seed": config.seed,
            "workers": config.workers,
            "format": config.format,
            "plot": config.plot,
        },
        "resolved": resolved.params,
        "derived": derived,
        "provenance": resolved.provenance,
        "warnings": resolved.warnings,
        "curves": curve_info,
        "files": files,
        "figures": figures,
        "library_version": __version__,
        "wall_time_s": time.perf_counter() - started,
    }
    sidecar_path = out_dir / f"{config.scenario}_sidecar.json"
    sidecar_path.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {sidecar_path}")
    for warning in resolved.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return sidecar


def run_from_sidecar(sidecar_path, output_path=None) -> dict:
    """Re-run the configuration recorded in a sidecar file."""
    data = json.loads(Path(sidecar_path).read_text(encoding="utf-8"))
    cfg = data["config"]
    config = RunConfig(
        scenario=cfg["scenario"],
        overrides=cfg["overrides"],
        seed=cfg["seed"],
        workers=cfg["workers"],
        format=cfg["format"],
        plot=cfg.get("plot", True),
        output_path=str(output_path) if output_path is not None else ".",
    )
    return run(config)


def _read_config_file(path: str) -> dict:
    entries = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def _workers_from_env() -> int | None:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None:
        return None
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{WORKERS_ENV}={raw!r} is not an integer") from exc
    return value


def _config_from_args(args) -> RunConfig:
    file_entries = _read_config_file(args.config) if args.config else {}
    overrides = {
        k: v for k, v in file_entries.items() if k not in _CONFIG_FILE_KEYS
    }
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()

    scenario = args.scenario or file_entries.get("scenario")
    if not scenario:
        raise ConfigError("no scenario given (use --scenario or a config file)")

    def _file_int(key, default):
        return int(file_entries[key]) if key in file_entries else default

    seed = args.seed if args.seed is not None else _file_int("seed", 0)
    workers = args.workers
    if workers is None:
        workers = _workers_from_env()
    if workers is None:
        workers = _file_int("workers", 1)
    fmt = args.format or file_entries.get("format", "csv")
    out = args.out or file_entries.get("out", ".")
    plot = args.plot
    if plot is None:
        raw = file_entries.get("plot", "true").lower()
        if raw not in ("true", "false"):
            raise ConfigError(f"plot must be true or false, got {raw!r}")
        plot = raw == "true"
    return RunConfig(
        scenario=scenario, overrides=overrides, seed=seed, workers=workers,
        output_path=out, format=fmt, plot=plot,
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exciton-sim",
        description="Probe spectra of cavity-dressed polar J-aggregates",
    )
    parser.add_argument("--scenario", choices=SCENARIOS)
    parser.add_argument("--config", metavar="PATH",
                        help="config file with 'key = value' lines")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one parameter (repeatable)")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--validate", action="store_true",
                        help="print the resolved parameters without running")
    parser.add_argument("--no-plot", dest="plot", action="store_const", const=False,
                        default=None, help="skip figure rendering")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        if args.validate:
            echo = validate(config)
            print(json.dumps(echo, indent=2))
            for warning in echo["warnings"]:
                print(f"warning: {warning}", file=sys.stderr)
            return EXIT_OK
        run(config)
        return EXIT_OK
    except (ConfigError, InputError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
