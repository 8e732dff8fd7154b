"""Electric-field-noise heating and growth of decay parameters with wait time.

Trap electric-field noise follows an empirical power law in frequency,
S_E ~ omega^(-alpha) with 0 <= alpha <= 2.  Converting field noise to quanta
per second adds one more inverse power of omega, so a single ion heats at

    nbar_rate(omega) = nbar_rate_ref * (omega_ref / omega)^(1 + alpha).

A spatially uniform noise field drives mode m of an N-ion chain in
proportion to (sum_i b_im)^2, which is N for a center-of-mass mode and zero
for any mode whose participation sums to zero.  Because the decay parameter
is linear in nbar, heating makes theta grow linearly in the wait time; only
the lowest (in-phase) axial mode contributes appreciably, since higher modes
both heat less and contribute as omega_m^(-2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .chain import ModeDecomposition
from .constants import HBAR
from .decoherence import BeamProfile
from .errors import InputError


@dataclass(frozen=True)
class NoiseModel:
    """Power-law electric-field noise anchored to a measured heating rate.

    Parameters
    ----------
    alpha : float
        Spectral exponent of the field noise, in [0, 2].
    nbar_rate_ref : float
        Measured single-ion heating rate (quanta/s) at ``omega_ref``.
    omega_ref : float
        Angular frequency of the reference measurement (rad/s).
    offset : float, optional
        Constant additive rate (1/s) applied to decay-parameter growth,
        representing heating that does not scale with the axial frequency.
        Fitted empirically; zero by default.
    inhomogeneity_factor : float, optional
        Multiplier >= 1 for field gradients across long chains that heat
        additional modes.  Applied verbatim, not modeled.
    """

    alpha: float
    nbar_rate_ref: float
    omega_ref: float
    offset: float = 0.0
    inhomogeneity_factor: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 2.0:
            raise InputError(f"noise exponent must be in [0, 2], got {self.alpha}")
        if self.nbar_rate_ref < 0:
            raise InputError("reference heating rate must be >= 0")
        if not self.omega_ref > 0:
            raise InputError("reference frequency must be positive")
        if self.offset < 0:
            raise InputError("rate offset must be >= 0")
        if self.inhomogeneity_factor < 1.0:
            raise InputError("inhomogeneity factor must be >= 1")


def heating_rate_at(noise: NoiseModel, omega) -> np.ndarray | float:
    """Single-ion heating rate nbar_rate_ref * (omega_ref/omega)^(1+alpha)."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise InputError("frequency must be positive")
    out = noise.nbar_rate_ref * (noise.omega_ref / omega) ** (1.0 + noise.alpha)
    return float(out) if out.ndim == 0 else out


def mode_heating_rate(noise: NoiseModel, modes: ModeDecomposition, m: int) -> float:
    """Heating rate of chain mode m under spatially uniform field noise.

    nbar_rate(omega_m) * (sum_i b_im)^2 * inhomogeneity_factor.  The squared
    participation sum is the work coupling of a uniform force to the mode.
    """
    if not 0 <= m < modes.n_modes:
        raise InputError(f"mode index {m} outside 0..{modes.n_modes - 1}")
    weight = modes.uniform_drive_weights()[m]
    return (
        heating_rate_at(noise, modes.frequencies[m])
        * weight
        * noise.inhomogeneity_factor
    )


def theta_rate(
    noise: NoiseModel,
    modes: ModeDecomposition,
    beams: Mapping[int, BeamProfile],
    positions: Sequence[float],
    all_modes: bool = False,
) -> np.ndarray:
    """Growth rate of each ion's decay parameter with wait time (1/s).

    For ion i with beam curvature ratio c_i = (Omega''/Omega)(x_i),

        dtheta_i/dt = sum_m b_im^2 (sum_j b_jm)^2 xi_m^2 (-c_i)
                       * nbar_rate(omega_m) * inhomogeneity + offset,

    restricted to the lowest mode (m = 0) unless ``all_modes`` is set.  For a
    centered Gaussian beam, -c_i = 2/w^2, so a single ion reduces to
    ``2 (xi_0/w)^2 * nbar_rate(omega_0)``.  Ions without a beam get rate 0.
    The result depends only on b^2 and (sum b)^2, so it is invariant under
    any eigenvector sign convention.
    """
    positions = np.asarray(positions, dtype=float)
    if len(positions) != modes.n_ions:
        raise InputError(f"expected {modes.n_ions} positions, got {len(positions)}")
    mode_indices = range(modes.n_modes) if all_modes else (0,)
    spreads_sq = HBAR / (2.0 * modes.species.mass * modes.frequencies)
    weights = modes.uniform_drive_weights()
    rates = np.zeros(modes.n_ions)
    for i, beam in beams.items():
        if not 0 <= i < modes.n_ions:
            raise InputError(f"beam assigned to ion {i}, outside 0..{modes.n_ions - 1}")
        c_ratio = float(beam.curvature_ratio(positions[i]))
        total = 0.0
        for m in mode_indices:
            total += (
                modes.participation[i, m] ** 2
                * weights[m]
                * spreads_sq[m]
                * (-c_ratio)
                * heating_rate_at(noise, modes.frequencies[m])
            )
        rates[i] = total * noise.inhomogeneity_factor + noise.offset
    return rates


def theta_rate_model(omega0, amplitude: float, alpha: float, offset: float = 0.0):
    """Empirical decay-parameter growth model A * omega0^(-2-alpha) + B.

    The -2-alpha exponent combines the heating power law (1+alpha) with the
    omega^(-1) scaling of the squared zero-point spread.  This is the target
    function for frequency-sweep fits; the fitted B absorbs frequency-
    independent contributions.
    """
    omega0 = np.asarray(omega0, dtype=float)
    if np.any(omega0 <= 0):
        raise InputError("frequency must be positive")
    out = amplitude * omega0 ** (-2.0 - alpha) + offset
    return float(out) if out.ndim == 0 else out


def gate_error_scaling(
    n_ions: int,
    t_wait: float,
    alpha: float,
    reference: tuple[int, float, float],
) -> float:
    """Relative two-qubit gate error from one calibrated reference point.

    error = ref_error * (t_wait / t_ref)^2 * (n_ions / n_ref)^(4 + 2 alpha),
    valid when the lowest axial frequency scales roughly as 1/N.  For
    alpha = 1 the chain-size exponent is 6.
    """
    n_ref, t_ref, err_ref = reference
    if n_ions < 1 or n_ref < 1:
        raise InputError("ion numbers must be >= 1")
    if t_wait < 0 or t_ref <= 0:
        raise InputError("wait times must be >= 0 (reference > 0)")
    return err_ref * (t_wait / t_ref) ** 2 * (n_ions / n_ref) ** (4.0 + 2.0 * alpha)
