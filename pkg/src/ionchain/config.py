"""Run-configuration loading, schema validation and object construction.

Configurations are YAML mappings with one section per concern (species,
potential, beam, thermal, noise, rabi, scan, gate, scaling, cooling).  Keys
carry their unit in the name (``axial_freq_khz``, ``spacing_um``); unknown
sections or keys are rejected before any computation runs.  Frequencies given
in kHz/MHz/GHz refer to ordinary frequencies and are converted to angular
frequencies internally.
"""

from __future__ import annotations

import math
from typing import Any, Mapping

import numpy as np
import yaml

from .chain import (
    EquispacedLogPotential,
    HarmonicPotential,
    QuadQuarticPotential,
    TrapPotential,
)
from .constants import KNOWN_SPECIES, IonSpecies
from .cooling import CoolingConfig
from .decoherence import GaussianBeam, TabulatedBeam
from .errors import ConfigError
from .heating import NoiseModel

_NUMBER = (int, float)


def _require_mapping(obj, where: str) -> Mapping[str, Any]:
    if not isinstance(obj, Mapping):
        raise ConfigError(f"{where} must be a mapping, got {type(obj).__name__}")
    return obj


def _check_keys(section: Mapping[str, Any], allowed, where: str):
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _get_number(section, key, where, required=False, default=None, positive=False):
    if key not in section:
        if required:
            raise ConfigError(f"missing required key {where}.{key}")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, _NUMBER):
        raise ConfigError(f"{where}.{key} must be a number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{where}.{key} must be positive, got {value}")
    return float(value)


def _get_int(section, key, where, required=False, default=None, minimum=None):
    if key not in section:
        if required:
            raise ConfigError(f"missing required key {where}.{key}")
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where}.{key} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{where}.{key} must be >= {minimum}, got {value}")
    return value


def _get_number_list(section, key, where, required=False, length=None):
    if key not in section:
        if required:
            raise ConfigError(f"missing required key {where}.{key}")
        return None
    value = section[key]
    if isinstance(value, _NUMBER) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}.{key} must be a non-empty list of numbers")
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, _NUMBER):
            raise ConfigError(f"{where}.{key}[{i}] must be a number, got {item!r}")
        out.append(float(item))
    if length is not None and len(out) != length:
        raise ConfigError(f"{where}.{key} must have length {length}, got {len(out)}")
    return out


KNOWN_SECTIONS = (
    "species",
    "potential",
    "beam",
    "thermal",
    "noise",
    "rabi",
    "scan",
    "gate",
    "scaling",
    "cooling",
)


def load_config(path) -> dict:
    """Read and structurally validate a YAML run configuration."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}")
    if raw is None:
        raw = {}
    config = _require_mapping(raw, "config")
    _check_keys(config, KNOWN_SECTIONS, "config")
    for name in config:
        _require_mapping(config[name], f"config.{name}")
    return dict(config)


def require_section(config: Mapping, name: str) -> Mapping[str, Any]:
    if name not in config:
        raise ConfigError(f"command requires a '{name}' section in the config")
    return config[name]


def build_species(config: Mapping) -> IonSpecies:
    section = require_section(config, "species")
    _check_keys(section, ("label", "mass_amu", "charge"), "species")
    label = section.get("label")
    if label is not None and not isinstance(label, str):
        raise ConfigError(f"species.label must be a string, got {label!r}")
    mass_amu = _get_number(section, "mass_amu", "species", positive=True)
    charge = _get_int(section, "charge", "species", default=1, minimum=1)
    if mass_amu is not None:
        return IonSpecies.from_amu(mass_amu, charge=charge, label=label or "")
    if label is None:
        raise ConfigError("species needs either a known label or mass_amu")
    if label not in KNOWN_SPECIES:
        known = ", ".join(sorted(KNOWN_SPECIES))
        raise ConfigError(f"unknown species label {label!r}; known: {known}")
    base = KNOWN_SPECIES[label]
    if charge != base.charge:
        return IonSpecies(mass=base.mass, charge=charge, label=label)
    return base


def build_potential(config: Mapping) -> tuple[TrapPotential, int]:
    """Return (potential, n_ions) from the potential section."""
    section = require_section(config, "potential")
    kind = section.get("kind")
    if kind == "harmonic":
        _check_keys(section, ("kind", "axial_freq_khz", "n_ions"), "potential")
        freq = _get_number(section, "axial_freq_khz", "potential", required=True, positive=True)
        n_ions = _get_int(section, "n_ions", "potential", default=1, minimum=1)
        return HarmonicPotential(omega0=2 * math.pi * freq * 1e3), n_ions
    if kind == "equispaced_log":
        _check_keys(section, ("kind", "n_ions", "spacing_um"), "potential")
        n_ions = _get_int(section, "n_ions", "potential", required=True, minimum=2)
        spacing = _get_number(section, "spacing_um", "potential", required=True, positive=True)
        return EquispacedLogPotential(n_ions=n_ions, spacing=spacing * 1e-6), n_ions
    if kind == "quad_quartic":
        _check_keys(section, ("kind", "a2_j_per_m2", "a4_j_per_m4", "n_ions"), "potential")
        a2 = _get_number(section, "a2_j_per_m2", "potential", default=0.0)
        a4 = _get_number(section, "a4_j_per_m4", "potential", default=0.0)
        n_ions = _get_int(section, "n_ions", "potential", default=1, minimum=1)
        return QuadQuarticPotential(a2=a2, a4=a4), n_ions
    raise ConfigError(
        "potential.kind must be one of harmonic, equispaced_log, quad_quartic; "
        f"got {kind!r}"
    )


def build_beam(config: Mapping, default_peak_rabi: float = 0.0):
    section = require_section(config, "beam")
    kind = section.get("kind", "gaussian")
    if kind == "gaussian":
        _check_keys(section, ("kind", "waist_nm", "center_um", "peak_rabi_khz"), "beam")
        waist = _get_number(section, "waist_nm", "beam", required=True, positive=True)
        center = _get_number(section, "center_um", "beam", default=0.0)
        peak_khz = _get_number(section, "peak_rabi_khz", "beam", positive=True)
        peak = 2 * math.pi * peak_khz * 1e3 if peak_khz is not None else default_peak_rabi
        return GaussianBeam(peak_rabi=peak, center=center * 1e-6, waist=waist * 1e-9)
    if kind == "tabulated":
        _check_keys(section, ("kind", "csv"), "beam")
        path = section.get("csv")
        if not isinstance(path, str):
            raise ConfigError("beam.csv must be a file path string")
        from .cli import read_numeric_csv  # local import to avoid a cycle

        columns, rows = read_numeric_csv(path, expected=("x_um", "rabi_khz"))
        x = np.array([r[0] for r in rows]) * 1e-6
        rabi = np.array([r[1] for r in rows]) * 2 * math.pi * 1e3
        return TabulatedBeam(x, rabi)
    raise ConfigError(f"beam.kind must be gaussian or tabulated, got {kind!r}")


def build_noise(config: Mapping) -> NoiseModel:
    section = require_section(config, "noise")
    _check_keys(
        section,
        (
            "alpha",
            "reference_rate_quanta_per_s",
            "reference_freq_mhz",
            "offset_per_s",
            "inhomogeneity_factor",
        ),
        "noise",
    )
    alpha = _get_number(section, "alpha", "noise", required=True)
    rate = _get_number(section, "reference_rate_quanta_per_s", "noise", required=True)
    ref_mhz = _get_number(section, "reference_freq_mhz", "noise", required=True, positive=True)
    offset = _get_number(section, "offset_per_s", "noise", default=0.0)
    inhom = _get_number(section, "inhomogeneity_factor", "noise", default=1.0)
    return NoiseModel(
        alpha=alpha,
        nbar_rate_ref=rate,
        omega_ref=2 * math.pi * ref_mhz * 1e6,
        offset=offset,
        inhomogeneity_factor=inhom,
    )


def build_thermal_nbar(config: Mapping, n_modes: int) -> np.ndarray:
    """Occupancies from the thermal section, broadcast scalar -> all modes."""
    section = require_section(config, "thermal")
    _check_keys(section, ("nbar",), "thermal")
    values = _get_number_list(section, "nbar", "thermal", required=True)
    if len(values) == 1:
        return np.full(n_modes, values[0])
    if len(values) != n_modes:
        raise ConfigError(
            f"thermal.nbar needs 1 or {n_modes} entries, got {len(values)}"
        )
    return np.array(values)


def build_cooling(config: Mapping) -> CoolingConfig:
    section = require_section(config, "cooling")
    _check_keys(
        section,
        (
            "coolant_fraction",
            "spacing_um",
            "wavelength_nm",
            "linewidth_mhz",
            "isotope_splitting_ghz",
        ),
        "cooling",
    )
    fraction = _get_number(section, "coolant_fraction", "cooling", required=True)
    spacing = _get_number(section, "spacing_um", "cooling", required=True, positive=True)
    wavelength = _get_number(section, "wavelength_nm", "cooling", required=True, positive=True)
    linewidth = _get_number(section, "linewidth_mhz", "cooling", required=True, positive=True)
    splitting = _get_number(
        section, "isotope_splitting_ghz", "cooling", required=True, positive=True
    )
    return CoolingConfig(
        coolant_fraction=fraction,
        spacing=spacing * 1e-6,
        wavelength=wavelength * 1e-9,
        linewidth=2 * math.pi * linewidth * 1e6,
        isotope_splitting=2 * math.pi * splitting * 1e9,
    )
