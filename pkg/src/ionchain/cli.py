"""Command-line interface.

Subcommands mirror the library's capabilities and write plot-ready CSV (or
JSON) tables:

- ``modes``          chain normal-mode table plus participation matrix
- ``rabi``           thermally averaged Rabi trace, closed form or Monte Carlo
- ``theta-scan``     decay parameter vs beam-ion offset
- ``fit``            beam / rabi / theta-growth / power-law fits of CSV data
- ``gate-fidelity``  fidelity bound vs wait time, with SPAM adjustment
- ``scaling``        lowest mode frequency and relative gate error vs N
- ``cooling``        sympathetic-cooling crosstalk bound

Outputs are deterministic: identical config and seed give byte-identical
files.  Exit codes: 0 success, 2 input or configuration error, 3 numerical
or solver failure.  Set IONCHAIN_LOG=DEBUG (or INFO, ...) for diagnostics on
standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .chain import (
    EquispacedLogPotential,
    HarmonicPotential,
    find_equilibrium,
    normal_modes,
    single_ion_modes,
)
from .config import (
    build_beam,
    build_cooling,
    build_noise,
    build_potential,
    build_species,
    build_thermal_nbar,
    load_config,
    require_section,
    _check_keys,
    _get_int,
    _get_number,
    _get_number_list,
)
from .cooling import crosstalk_rate
from .decoherence import (
    GaussianBeam,
    ThermalState,
    decay_parameters,
    rabi_trace,
    rabi_trace_monte_carlo,
    theta_profile_gaussian,
    zero_point_spread,
)
from .errors import (
    ConfigError,
    DegenerateChainError,
    FitError,
    InputError,
    SolverError,
    UnstableChainError,
)
from .fitting import (
    fit_beam_profile,
    fit_rabi_trace,
    fit_theta_growth,
    fit_theta_power_law,
)
from .gates import gate_fidelity_bound, spam_adjust_prediction
from .heating import gate_error_scaling, theta_rate

log = logging.getLogger("ionchain")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _fmt(value) -> str:
    return format(float(value), ".12g")


def provenance(command: str, seed: int) -> dict:
    return {"tool": "ionchain", "version": __version__, "command": command, "seed": seed}


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _write_text(out: Path | None, text: str):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def write_table(args, columns, rows, extra: dict | None = None):
    """Emit a table as CSV (default) or JSON, honoring --out."""
    if args.format == "json":
        payload = {
            "provenance": provenance(args.command, args.seed),
            "columns": list(columns),
            "rows": [[float(v) for v in row] for row in rows],
        }
        if extra:
            payload.update(extra)
        _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write_text(args.out, render_csv(columns, rows))


def write_json_payload(args, payload: dict):
    body = {"provenance": provenance(args.command, args.seed)}
    body.update(payload)
    _write_text(args.out, json.dumps(body, indent=2) + "\n")


def sibling_path(out: Path, suffix: str) -> Path:
    out = Path(out)
    return out.with_name(out.stem + suffix)


def read_numeric_csv(path, expected=None, optional_sigma=False):
    """Read a small numeric CSV with a header row.

    Returns (header, rows of floats).  Raises ConfigError with row/column
    diagnostics on missing files, bad headers or non-numeric cells.
    """
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ConfigError(f"{path}: empty file")
            header = [h.strip() for h in header]
            if expected is not None:
                want = list(expected)
                ok = header[: len(want)] == want and (
                    len(header) == len(want)
                    or (optional_sigma and header[len(want):] == ["sigma"])
                )
                if not ok:
                    suffix = " [,sigma]" if optional_sigma else ""
                    raise ConfigError(
                        f"{path}: expected header {','.join(want)}{suffix}, "
                        f"got {','.join(header)}"
                    )
            rows = []
            for line_no, row in enumerate(reader, start=2):
                if not row or all(not cell.strip() for cell in row):
                    continue
                if len(row) != len(header):
                    raise ConfigError(
                        f"{path}: row {line_no} has {len(row)} cells, expected {len(header)}"
                    )
                values = []
                for col_no, cell in enumerate(row, start=1):
                    try:
                        values.append(float(cell))
                    except ValueError:
                        raise ConfigError(
                            f"{path}: non-numeric value {cell!r} at row {line_no}, "
                            f"column {col_no} ({header[col_no - 1]})"
                        )
                rows.append(values)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    return header, rows


def _load_required_config(args) -> dict:
    if not args.config:
        raise ConfigError("this command requires --config <file>")
    return load_config(args.config)


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def cmd_modes(args) -> int:
    config = _load_required_config(args)
    species = build_species(config)
    potential, n_ions = build_potential(config)
    chain = find_equilibrium(species, potential, n_ions)
    modes = normal_modes(chain)
    weights = modes.uniform_drive_weights()
    rows = [
        (m, modes.frequencies[m] / (2 * math.pi) / 1e3, weights[m])
        for m in range(modes.n_modes)
    ]
    extra = None
    if args.format == "json":
        extra = {
            "inputs": {
                "species": species.label or species.mass_amu,
                "potential": type(potential).__name__,
                "n_ions": n_ions,
            },
            "participation": [[float(v) for v in row] for row in modes.participation],
        }
    write_table(args, ("mode_index", "freq_khz", "participation_sum_sq"), rows, extra)
    if args.out is not None and args.format == "csv":
        part_cols = ["ion_index"] + [f"mode_{m}" for m in range(modes.n_modes)]
        part_rows = [
            [i] + list(modes.participation[i, :]) for i in range(modes.n_ions)
        ]
        _write_text(sibling_path(args.out, ".participation.csv"), render_csv(part_cols, part_rows))
    return EXIT_OK


def _rabi_thetas(config) -> np.ndarray:
    """Decay parameters for the rabi command: explicit list or single-ion pipeline."""
    section = require_section(config, "rabi")
    thetas = _get_number_list(section, "theta", "rabi")
    if thetas is not None:
        return np.asarray(thetas)
    species = build_species(config)
    potential, n_ions = build_potential(config)
    if not isinstance(potential, HarmonicPotential) or n_ions != 1:
        raise ConfigError(
            "rabi.theta is required unless the config describes a single ion "
            "in a harmonic potential (plus beam and thermal sections)"
        )
    modes = single_ion_modes(species, potential.omega0)
    nbar = build_thermal_nbar(config, 1)
    beam = build_beam(config, default_peak_rabi=1.0)
    theta = decay_parameters(modes, ThermalState(nbar), {0: beam}, [0.0])
    return theta[0, :]


def cmd_rabi(args) -> int:
    config = _load_required_config(args)
    section = require_section(config, "rabi")
    _check_keys(
        section, ("drive_khz", "t_max_us", "n_points", "n_samples", "theta"), "rabi"
    )
    drive_khz = _get_number(section, "drive_khz", "rabi", required=True, positive=True)
    t_max_us = _get_number(section, "t_max_us", "rabi", required=True, positive=True)
    n_points = _get_int(section, "n_points", "rabi", default=200, minimum=2)
    n_samples = _get_int(section, "n_samples", "rabi", default=100_000, minimum=2)
    thetas = _rabi_thetas(config)
    omega0 = 2 * math.pi * drive_khz * 1e3
    times = np.linspace(0.0, t_max_us * 1e-6, n_points)
    closed = rabi_trace(omega0, thetas, times)
    columns = ["t_us", "p1", "contrast", "phase_rad"]
    if args.mc:
        mc = rabi_trace_monte_carlo(omega0, thetas, times, n_samples, seed=args.seed)
        columns.append("mc_stderr")
        rows = [
            (t * 1e6, mc.p1[k], closed.contrast[k], closed.phase[k], mc.stderr[k])
            for k, t in enumerate(times)
        ]
    else:
        rows = [
            (t * 1e6, closed.p1[k], closed.contrast[k], closed.phase[k])
            for k, t in enumerate(times)
        ]
    extra = None
    if args.format == "json":
        extra = {
            "inputs": {
                "drive_khz": drive_khz,
                "theta": [float(v) for v in thetas],
                "monte_carlo": bool(args.mc),
                "n_samples": n_samples if args.mc else None,
            }
        }
    write_table(args, columns, rows, extra)
    return EXIT_OK


def cmd_theta_scan(args) -> int:
    config = _load_required_config(args)
    section = require_section(config, "scan")
    _check_keys(section, ("x_min_um", "x_max_um", "n_points"), "scan")
    x_min = _get_number(section, "x_min_um", "scan", required=True)
    x_max = _get_number(section, "x_max_um", "scan", required=True)
    if not x_max > x_min:
        raise ConfigError("scan.x_max_um must exceed scan.x_min_um")
    n_points = _get_int(section, "n_points", "scan", default=121, minimum=2)
    species = build_species(config)
    potential, n_ions = build_potential(config)
    if not isinstance(potential, HarmonicPotential) or n_ions != 1:
        raise ConfigError("theta-scan expects a single ion in a harmonic potential")
    beam = build_beam(config, default_peak_rabi=1.0)
    if not isinstance(beam, GaussianBeam):
        raise ConfigError("theta-scan requires a gaussian beam")
    nbar = float(build_thermal_nbar(config, 1)[0])
    spread = zero_point_spread(species, potential.omega0)
    x = np.linspace(x_min * 1e-6, x_max * 1e-6, n_points)
    theta = theta_profile_gaussian(x - beam.center, beam.waist, spread, nbar)
    rows = [(xi * 1e6, theta[k]) for k, xi in enumerate(x)]
    extra = None
    if args.format == "json":
        extra = {
            "inputs": {
                "waist_nm": beam.waist * 1e9,
                "axial_freq_khz": potential.omega0 / (2 * math.pi) / 1e3,
                "nbar": nbar,
            }
        }
    write_table(args, ("x_um", "theta"), rows, extra)
    return EXIT_OK


_FIT_INPUTS = {
    "beam": ("x_um", "signal"),
    "rabi": ("t_us", "p1"),
    "theta-growth": ("tw_ms", "theta"),
    "power-law": ("freq_khz", "rate_per_s"),
}


def cmd_fit(args) -> int:
    if args.format == "csv":
        raise ConfigError("fit emits JSON; use --format json (the default here)")
    header, rows = read_numeric_csv(
        args.data, expected=_FIT_INPUTS[args.recipe], optional_sigma=True
    )
    data = np.array(rows)
    x, y = data[:, 0], data[:, 1]
    sigma = data[:, 2] if data.shape[1] > 2 else None

    if args.recipe == "beam":
        result = fit_beam_profile(x, y, sigma)
        names = ("amplitude", "center_um", "waist_um")
        values = result.params
        sigmas = result.uncertainties
    elif args.recipe == "rabi":
        result = fit_rabi_trace(x * 1e-6, y, sigma=sigma)
        names = ("rabi_freq_khz", "theta")
        scale = np.array([1.0 / (2 * math.pi * 1e3), 1.0])
        values = result.params * scale
        sigmas = result.uncertainties * scale
    elif args.recipe == "theta-growth":
        result = fit_theta_growth(x * 1e-3, y, sigma)
        names = ("theta0", "rate_per_s")
        values = result.params
        sigmas = result.uncertainties
    else:  # power-law
        result = fit_theta_power_law(2 * math.pi * x * 1e3, y, sigma)
        names = ("amplitude_rad_s", "alpha", "offset_per_s")
        values = result.params
        sigmas = result.uncertainties

    payload = {
        "recipe": args.recipe,
        "parameters": {
            name: {"value": float(v), "sigma": float(s)}
            for name, v, s in zip(names, values, sigmas)
        },
        "reduced_chisq": None
        if not np.isfinite(result.reduced_chisq)
        else float(result.reduced_chisq),
        "converged": result.converged,
        "n_points": int(len(x)),
        "flags": list(result.flags),
    }
    write_json_payload(args, payload)
    if args.out is not None:
        weights = sigma if sigma is not None else np.ones_like(y)
        model_y = y + result.residuals * weights  # residuals are (model - y)/sigma
        res_rows = [
            (x[k], y[k], model_y[k], y[k] - model_y[k]) for k in range(len(x))
        ]
        _write_text(
            sibling_path(args.out, ".residuals.csv"),
            render_csv((header[0], header[1], "model", "residual"), res_rows),
        )
    return EXIT_OK


def cmd_gate_fidelity(args) -> int:
    config = _load_required_config(args)
    section = require_section(config, "gate")
    _check_keys(
        section,
        (
            "ion_i",
            "ion_j",
            "n_gates",
            "spam_error",
            "theta0",
            "rates_per_s",
            "rate_sigmas_per_s",
            "tw_list_ms",
        ),
        "gate",
    )
    ion_i = _get_int(section, "ion_i", "gate", required=True, minimum=0)
    ion_j = _get_int(section, "ion_j", "gate", required=True, minimum=0)
    if ion_i == ion_j:
        raise ConfigError("gate.ion_i and gate.ion_j must differ")
    n_gates = _get_int(section, "n_gates", "gate", default=1, minimum=1)
    spam_error = _get_number(section, "spam_error", "gate", default=0.0)
    theta0 = _get_number_list(section, "theta0", "gate", length=2) or [0.0, 0.0]
    rates = _get_number_list(section, "rates_per_s", "gate", length=2)
    rate_sigmas = _get_number_list(section, "rate_sigmas_per_s", "gate", length=2) or [0.0, 0.0]
    if args.tw_list is not None:
        tw_ms = args.tw_list
    else:
        tw_ms = _get_number_list(section, "tw_list_ms", "gate")
        if tw_ms is None:
            raise ConfigError("provide --tw-list or gate.tw_list_ms")

    if rates is None:
        species = build_species(config)
        potential, n_ions = build_potential(config)
        if max(ion_i, ion_j) >= n_ions:
            raise ConfigError("gate ions outside the chain")
        noise = build_noise(config)
        chain = find_equilibrium(species, potential, n_ions)
        modes = normal_modes(chain)
        beam = build_beam(config, default_peak_rabi=1.0)
        if not isinstance(beam, GaussianBeam):
            raise ConfigError("derived theta rates require a gaussian beam")
        # each addressed ion gets its own copy of the beam, centered on it
        beams = {
            idx: GaussianBeam(beam.peak_rabi, center=chain.positions[idx], waist=beam.waist)
            for idx in (ion_i, ion_j)
        }
        all_rates = theta_rate(noise, modes, beams, chain.positions)
        rates = [all_rates[ion_i], all_rates[ion_j]]
        log.info("derived theta rates: %s /s", rates)

    k = n_gates * math.pi / 2.0
    rows = []
    for tw in tw_ms:
        if tw < 0:
            raise ConfigError("wait times must be >= 0")
        t = tw * 1e-3
        ti = theta0[0] + rates[0] * t
        tj = theta0[1] + rates[1] * t
        f_bound = gate_fidelity_bound([ti], [tj], n_gates)
        f_spam = spam_adjust_prediction(f_bound, spam_error)
        s = ti + tj
        sigma_s = math.hypot(rate_sigmas[0], rate_sigmas[1]) * t
        df_ds = 0.5 * k * k * abs(s) * (1.0 + k * k * s * s) ** -1.5
        f_err = (1.0 - spam_error) * df_ds * sigma_s
        rows.append((tw, f_bound, f_spam, f_err))
    extra = None
    if args.format == "json":
        extra = {
            "inputs": {
                "ion_i": ion_i,
                "ion_j": ion_j,
                "n_gates": n_gates,
                "spam_error": spam_error,
                "theta0": theta0,
                "rates_per_s": [float(r) for r in rates],
                "rate_sigmas_per_s": rate_sigmas,
            }
        }
    write_table(args, ("tw_ms", "F_bound", "F_spam", "F_err"), rows, extra)
    return EXIT_OK


def cmd_scaling(args) -> int:
    config = _load_required_config(args)
    section = require_section(config, "scaling")
    _check_keys(section, ("n_list", "alpha", "omega0_mode", "spacing_um"), "scaling")
    if args.n_list is not None:
        n_list = args.n_list
    else:
        raw = _get_number_list(section, "n_list", "scaling", required=True)
        n_list = [int(n) for n in raw]
        if any(n != int(n) for n in raw):
            raise ConfigError("scaling.n_list must contain integers")
    if any(n < 2 for n in n_list):
        raise ConfigError("scaling.n_list entries must be >= 2")
    alpha = _get_number(section, "alpha", "scaling", required=True)
    if not 0.0 <= alpha <= 2.0:
        raise ConfigError("scaling.alpha must lie in [0, 2]")
    mode = section.get("omega0_mode", "exact")
    if mode not in ("exact", "inverse_n"):
        raise ConfigError("scaling.omega0_mode must be exact or inverse_n")
    spacing = _get_number(section, "spacing_um", "scaling", required=True, positive=True)
    species = build_species(config)

    rows = []
    ref = None
    for n in n_list:
        chain = find_equilibrium(species, EquispacedLogPotential(n, spacing * 1e-6))
        modes = normal_modes(chain)
        omega0 = modes.frequencies[0]
        if mode == "exact":
            center = n // 2
            coupling = (
                modes.participation[center, 0] ** 2 * modes.uniform_drive_weights()[0]
            )
            rate = coupling * omega0 ** (-2.0 - alpha)
            if ref is None:
                ref = rate
            rel_error = (rate / ref) ** 2
        else:
            rel_error = gate_error_scaling(n, 1.0, alpha, (n_list[0], 1.0, 1.0))
        rows.append((n, omega0 / (2 * math.pi) / 1e3, rel_error))
    extra = None
    if args.format == "json":
        extra = {
            "inputs": {"alpha": alpha, "omega0_mode": mode, "spacing_um": spacing}
        }
    write_table(args, ("n_ions", "omega0_khz", "rel_gate_error"), rows, extra)
    return EXIT_OK


def cmd_cooling(args) -> int:
    if args.format == "csv":
        raise ConfigError("cooling emits JSON; use --format json (the default here)")
    config = _load_required_config(args)
    cfg = build_cooling(config)
    rate = crosstalk_rate(cfg)
    write_json_payload(
        args,
        {
            "crosstalk_rate_per_s": rate,
            "inputs": {
                "coolant_fraction": cfg.coolant_fraction,
                "spacing_um": cfg.spacing * 1e6,
                "wavelength_nm": cfg.wavelength * 1e9,
                "linewidth_mhz": cfg.linewidth / (2 * math.pi) / 1e6,
                "isotope_splitting_ghz": cfg.isotope_splitting / (2 * math.pi) / 1e9,
            },
            "note": (
                "Upper bound at unity repump saturation; dark-state cooling and "
                "elastic scattering typically reduce the true rate by an order "
                "of magnitude or more. Not applied numerically."
            ),
        },
    )
    return EXIT_OK


# ----------------------------------------------------------------------
# argument parsing and dispatch
# ----------------------------------------------------------------------

def _comma_list(cast, what):
    def parse(text):
        try:
            return [cast(item) for item in text.split(",") if item.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated {what}: {text!r}")

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--out", type=Path, help="output file (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument(
        "--format",
        choices=("csv", "json"),
        default=None,
        help="table output format (default csv; fit and cooling are json)",
    )

    parser = argparse.ArgumentParser(
        prog="ionchain",
        description="Ion-chain modes, thermal Rabi decoherence and gate-fidelity bounds.",
    )
    parser.add_argument("--version", action="version", version=f"ionchain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("modes", parents=[common], help="chain normal-mode table")

    p_rabi = sub.add_parser("rabi", parents=[common], help="thermal Rabi trace")
    group = p_rabi.add_mutually_exclusive_group()
    group.add_argument("--mc", action="store_true", help="Monte-Carlo thermal average")
    group.add_argument("--closed", action="store_true", help="closed form (default)")

    sub.add_parser("theta-scan", parents=[common], help="decay parameter vs position")

    p_fit = sub.add_parser("fit", parents=[common], help="least-squares fits")
    p_fit.add_argument("recipe", choices=tuple(_FIT_INPUTS))
    p_fit.add_argument("data", help="CSV data file")

    p_gate = sub.add_parser(
        "gate-fidelity", parents=[common], help="fidelity bound vs wait time"
    )
    p_gate.add_argument(
        "--tw-list", type=_comma_list(float, "numbers"), help="wait times in ms"
    )

    p_scaling = sub.add_parser(
        "scaling", parents=[common], help="lowest mode and gate error vs chain size"
    )
    p_scaling.add_argument(
        "--n-list", type=_comma_list(int, "integers"), help="chain sizes"
    )

    sub.add_parser("cooling", parents=[common], help="cooling crosstalk bound")
    return parser


_COMMANDS = {
    "modes": cmd_modes,
    "rabi": cmd_rabi,
    "theta-scan": cmd_theta_scan,
    "fit": cmd_fit,
    "gate-fidelity": cmd_gate_fidelity,
    "scaling": cmd_scaling,
    "cooling": cmd_cooling,
}


def main(argv=None) -> int:
    level = os.environ.get("IONCHAIN_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed < 0:
        parser.error("--seed must be >= 0")
    if args.format is None:
        args.format = "json" if args.command in ("fit", "cooling") else "csv"
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"ionchain {args.command}: config error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SolverError, UnstableChainError, DegenerateChainError, FitError) as exc:
        print(f"ionchain {args.command}: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InputError as exc:
        print(f"ionchain {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"ionchain {args.command}: i/o error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
