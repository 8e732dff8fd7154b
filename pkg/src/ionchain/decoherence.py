"""Beam profiles, decay parameters and thermally averaged Rabi dynamics.

An ion driven by a laser beam pointed perpendicular to the chain axis sees a
Rabi frequency proportional to the local field amplitude.  Thermal motion
along the axis samples the beam's curvature, so the time-averaged Rabi
frequency of ion i shifts by

    mean_Omega_i = Omega_i0 * (1 - sum_m theta_im * u_m),   u_m = E_m / kB T_m

where the dimensionless decay parameter of ion i in mode m is

    theta_im = - b_im^2 * xi_m^2 * (Omega''/Omega)(x_i) * nbar_m,

with xi_m = sqrt(hbar / (2 M omega_m)) the zero-point spread and nbar_m the
mean thermal occupancy (kB T_m = hbar omega_m nbar_m, valid for nbar >> 1).
Averaging over exponentially distributed mode energies gives the closed-form
population trace

    p1(t) = (1 - C(t) cos(Omega0 t - phi(t))) / 2
    C(t)  = prod_m (1 + theta_m^2 Omega0^2 t^2)^(-1/2)
    phi(t) = sum_m arctan(theta_m Omega0 t)

so the contrast decays algebraically while the oscillation accumulates the
phase lag phi (reported positive for positive theta).  A seeded Monte-Carlo
average over the same energy distribution is provided as an independent
numerical check of the closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np
from scipy.interpolate import CubicSpline

from .chain import ModeDecomposition
from .constants import HBAR, IonSpecies
from .errors import DomainError, InputError, LowOccupancyWarning

LOW_OCCUPANCY_THRESHOLD = 10.0


@dataclass(frozen=True)
class GaussianBeam:
    """Gaussian addressing beam, amplitude profile Omega(x) = peak * exp(-(x-c)^2/w^2).

    ``waist`` is the 1/e^2 intensity radius; the field amplitude (and hence
    the Rabi frequency) then falls as exp(-x^2/w^2).
    """

    peak_rabi: float
    center: float
    waist: float

    def __post_init__(self):
        if not self.waist > 0:
            raise InputError(f"beam waist must be positive, got {self.waist}")
        if self.peak_rabi < 0:
            raise InputError(f"peak Rabi frequency must be >= 0, got {self.peak_rabi}")

    def rabi_at(self, x):
        """Rabi frequency Omega(x) in rad/s."""
        s = (np.asarray(x, dtype=float) - self.center) / self.waist
        return self.peak_rabi * np.exp(-s * s)

    def curvature_ratio(self, x):
        """Omega''(x)/Omega(x) in 1/m^2: (4 s^2 - 2)/w^2 with s=(x-c)/w.

        Negative at the beam center, zero at |x - c| = w/sqrt(2).
        """
        s = (np.asarray(x, dtype=float) - self.center) / self.waist
        return (4.0 * s * s - 2.0) / (self.waist * self.waist)


class TabulatedBeam:
    """Measured beam profile: cubic-spline interpolation of (x, Omega) samples.

    Rabi queries are valid on the sampled range; curvature queries exclude
    the outermost sample on each side, where the spline's second derivative
    is unreliable.
    """

    def __init__(self, x: Sequence[float], rabi: Sequence[float]):
        x = np.asarray(x, dtype=float)
        rabi = np.asarray(rabi, dtype=float)
        if x.ndim != 1 or x.shape != rabi.shape:
            raise InputError("x and rabi samples must be 1-d arrays of equal length")
        if len(x) < 4:
            raise InputError("tabulated beam needs at least 4 samples")
        if np.any(np.diff(x) <= 0):
            raise InputError("tabulated beam samples must be strictly increasing in x")
        self.x = x
        self.rabi = rabi
        self._spline = CubicSpline(x, rabi)

    def rabi_at(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x[0]) or np.any(x > self.x[-1]):
            raise DomainError("position outside tabulated beam range")
        return self._spline(x)

    def curvature_ratio(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.x[1]) or np.any(x > self.x[-2]):
            raise DomainError("curvature query outside interior of tabulated range")
        omega = self._spline(x)
        if np.any(omega == 0):
            raise DomainError("curvature ratio undefined where Omega(x) = 0")
        return self._spline(x, 2) / omega


BeamProfile = Union[GaussianBeam, TabulatedBeam]


def rabi_at(beam: BeamProfile, x):
    """Beam Rabi frequency at x (dispatch helper)."""
    return beam.rabi_at(x)


def curvature_ratio(beam: BeamProfile, x):
    """Beam curvature ratio Omega''/Omega at x (dispatch helper)."""
    return beam.curvature_ratio(x)


@dataclass(frozen=True)
class ThermalState:
    """Mean thermal occupancies nbar_m of the axial modes.

    The classical energy-averaging model assumes nbar >> 1; constructing a
    state with any nbar below 10 emits :class:`LowOccupancyWarning`.
    """

    nbar: np.ndarray

    def __post_init__(self):
        nbar = np.atleast_1d(np.asarray(self.nbar, dtype=float))
        object.__setattr__(self, "nbar", nbar)
        if np.any(nbar < 0):
            raise InputError("mode occupancies must be >= 0")
        if np.any(nbar < LOW_OCCUPANCY_THRESHOLD):
            warnings.warn(
                "thermal occupancy below 10 quanta: the classical "
                "energy-averaging model assumes nbar >> 1",
                LowOccupancyWarning,
                stacklevel=2,
            )

    @classmethod
    def from_temperature(cls, modes: ModeDecomposition, temperature: float) -> "ThermalState":
        """Equipartition occupancies nbar_m = kB T / (hbar omega_m)."""
        from .constants import KB

        if not temperature > 0:
            raise InputError(f"temperature must be positive, got {temperature}")
        return cls(KB * temperature / (HBAR * modes.frequencies))

    @classmethod
    def uniform(cls, n_modes: int, nbar: float) -> "ThermalState":
        return cls(np.full(n_modes, float(nbar)))


def zero_point_spread(species: IonSpecies, omega: float) -> float:
    """Ground-state positional spread sqrt(hbar / (2 M omega)) in meters."""
    if not omega > 0:
        raise InputError(f"mode frequency must be positive, got {omega}")
    return math.sqrt(HBAR / (2.0 * species.mass * omega))


def decay_parameters(
    modes: ModeDecomposition,
    thermal: ThermalState,
    beams: Mapping[int, BeamProfile],
    positions: Sequence[float],
) -> np.ndarray:
    """Per-ion, per-mode decay parameters theta[i, m].

    Parameters
    ----------
    modes : ModeDecomposition
        Chain normal modes (N ions, M modes).
    thermal : ThermalState
        Occupancies nbar_m, length M.
    beams : mapping ion index -> BeamProfile
        Addressing beam for each driven ion.  Ions without a beam get a zero
        row.
    positions : array
        Equilibrium ion positions (m), length N; the beam curvature is
        evaluated at each addressed ion's position.

    Returns
    -------
    np.ndarray
        Signed theta[i, m]; positive where the ion sits inside the central
        concave region of a Gaussian beam (|x - c| < w/sqrt(2)).
    """
    positions = np.asarray(positions, dtype=float)
    n, m = modes.n_ions, modes.n_modes
    if len(positions) != n:
        raise InputError(f"expected {n} positions, got {len(positions)}")
    if len(thermal.nbar) != m:
        raise InputError(f"expected {m} occupancies, got {len(thermal.nbar)}")
    for i in beams:
        if not 0 <= i < n:
            raise InputError(f"beam assigned to ion {i}, outside 0..{n - 1}")
    spreads_sq = HBAR / (2.0 * modes.species.mass * modes.frequencies)
    theta = np.zeros((n, m))
    for i, beam in beams.items():
        c_ratio = float(beam.curvature_ratio(positions[i]))
        theta[i, :] = (
            -modes.participation[i, :] ** 2 * spreads_sq * c_ratio * thermal.nbar
        )
    return theta


def theta_profile_gaussian(x, waist: float, spread: float, nbar: float):
    """Closed-form decay parameter vs position under a Gaussian beam.

    theta(x) = 2 (xi/w)^2 (1 - 2 x^2/w^2) nbar, with x measured from the
    beam center: maximal on axis, zero at the beam inflection points
    x = +- w/sqrt(2), weakly negative beyond.
    """
    if not waist > 0:
        raise InputError(f"beam waist must be positive, got {waist}")
    x = np.asarray(x, dtype=float)
    r = spread / waist
    return 2.0 * r * r * (1.0 - 2.0 * x * x / (waist * waist)) * nbar


@dataclass(frozen=True)
class RabiTrace:
    """Closed-form thermally averaged Rabi oscillation."""

    times: np.ndarray
    p1: np.ndarray
    contrast: np.ndarray
    phase: np.ndarray


@dataclass(frozen=True)
class MonteCarloRabiTrace:
    """Monte-Carlo estimate of the thermally averaged Rabi oscillation."""

    times: np.ndarray
    p1: np.ndarray
    stderr: np.ndarray
    n_samples: int
    seed: int


def rabi_trace(omega0: float, thetas, times) -> RabiTrace:
    """Thermally averaged resonant Rabi oscillation of one qubit.

    Parameters
    ----------
    omega0 : float
        Equilibrium-position Rabi frequency (rad/s).
    thetas : array
        Decay parameters theta_m of the modes coupled to this ion.
    times : array
        Drive durations in seconds, >= 0.

    Returns
    -------
    RabiTrace
        ``p1 = (1 - C cos(omega0 t - phi)) / 2`` with contrast C in (0, 1]
        and phase lag ``phi = sum_m arctan(theta_m omega0 t)``.
    """
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise InputError("drive times must be >= 0")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    a = thetas[:, None] * omega0 * times[None, :]
    contrast = np.prod(1.0 / np.sqrt(1.0 + a * a), axis=0)
    phase = np.sum(np.arctan(a), axis=0)
    p1 = 0.5 * (1.0 - contrast * np.cos(omega0 * times - phase))
    return RabiTrace(times=times, p1=p1, contrast=contrast, phase=phase)


def _mode_energy_samples(n_modes: int, n_samples: int, seed: int) -> np.ndarray:
    """Unit-mean exponential energy samples, one independent stream per mode.

    Stream-splitting rule: mode m uses ``numpy.random.default_rng([seed, m])``
    (PCG64 seeded from the entropy pair).  Results are therefore independent
    of any parallel decomposition and bit-reproducible for a given seed.
    """
    samples = np.empty((n_modes, n_samples))
    for m in range(n_modes):
        samples[m] = np.random.default_rng([seed, m]).exponential(1.0, n_samples)
    return samples


def rabi_trace_monte_carlo(
    omega0: float,
    thetas,
    times,
    n_samples: int = 100_000,
    seed: int = 0,
) -> MonteCarloRabiTrace:
    """Monte-Carlo thermal average of the Rabi oscillation.

    Draws u_m ~ Exponential(1) per mode (u_m is the mode energy over kB T_m),
    forms the shifted Rabi frequency ``omega0 * (1 - sum_m theta_m u_m)`` and
    averages ``sin^2(omega t / 2)`` pointwise.  Serves as the independent
    oracle for :func:`rabi_trace`; negative frequency samples are kept as-is
    (the average is even in the frequency).

    Deterministic for a given seed; see :func:`_mode_energy_samples` for the
    per-mode stream-splitting rule.
    """
    if n_samples < 1:
        raise InputError("n_samples must be >= 1")
    times = np.asarray(times, dtype=float)
    if np.any(times < 0):
        raise InputError("drive times must be >= 0")
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    u = _mode_energy_samples(len(thetas), n_samples, seed)
    factor = 1.0 - thetas @ u  # relative Rabi frequency per sample
    p1 = np.empty_like(times)
    stderr = np.empty_like(times)
    for k, t in enumerate(times):
        values = np.sin(0.5 * omega0 * t * factor) ** 2
        p1[k] = values.mean()
        stderr[k] = values.std(ddof=1) / math.sqrt(n_samples) if n_samples > 1 else 0.0
    return MonteCarloRabiTrace(
        times=times, p1=p1, stderr=stderr, n_samples=n_samples, seed=seed
    )


def in_phase_theta(
    modes: ModeDecomposition,
    theta_single: float,
    addressed: Sequence[int] | None = None,
) -> np.ndarray:
    """Per-ion decay parameters when only the lowest axial mode is heated.

    Given the decay parameter ``theta_single`` of a single ion in a trap at
    the chain's lowest mode frequency, ion i of the chain gets

        theta_i = b_i0^2 * (sum_j b_j0)^2 * theta_single.

    For a harmonic chain the in-phase mode is the center-of-mass mode with
    b_i0 = N^(-1/2), so theta_i reduces to theta_single for every ion.

    Parameters
    ----------
    addressed : sequence of int, optional
        Ions actually driven; others get theta_i = 0.  Default: all ions.
    """
    b0 = modes.participation[:, 0]
    weight = b0.sum() ** 2
    theta = b0 * b0 * weight * theta_single
    if addressed is not None:
        mask = np.zeros(modes.n_ions, dtype=bool)
        for i in addressed:
            if not 0 <= i < modes.n_ions:
                raise InputError(f"addressed ion {i} outside 0..{modes.n_ions - 1}")
            mask[i] = True
        theta = np.where(mask, theta, 0.0)
    return theta
