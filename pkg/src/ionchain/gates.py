"""Two-qubit gate fidelity under thermal axial motion, plus SPAM handling.

The entangling (two-qubit) Rabi frequency is proportional to the product of
the two single-ion Rabi frequencies, so thermal axial motion perturbs the
accumulated gate angle through the joint decay parameter theta_im + theta_jm.
After N_g fully entangling gates (target angle chi = N_g pi/4), averaging
over exponentially distributed mode energies bounds the achievable fidelity:

    F = 1/2 + 1/2 * prod_m [1 + (N_g pi/2)^2 (theta_im + theta_jm)^2]^(-1/2).

This product form equals the fidelity extracted by the standard
population-plus-parity-contrast measurement on the thermal ensemble, and it
upper-bounds the plain state overlap <cos^2(angle error)> (which carries an
extra cosine of the mean phase).  The Monte-Carlo estimator below reports
both quantities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .decoherence import _mode_energy_samples
from .errors import InputError

SPAM_ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class GatePlan:
    """Which ions are gated and how many fully entangling gates are chained."""

    ion_i: int
    ion_j: int
    n_gates: int = 1
    duration: float = 0.0

    def __post_init__(self):
        if self.ion_i == self.ion_j:
            raise InputError("gate needs two distinct ions")
        if self.n_gates < 1:
            raise InputError(f"gate count must be >= 1, got {self.n_gates}")
        if self.duration < 0:
            raise InputError("gate duration must be >= 0")

    @property
    def target_angle(self) -> float:
        """Total entangling angle chi = N_g pi/4."""
        return self.n_gates * math.pi / 4.0


def gate_fidelity_bound(theta_i, theta_j, n_gates: int = 1) -> float:
    """Fidelity bound after ``n_gates`` fully entangling gates.

    ``theta_i`` and ``theta_j`` are the per-mode decay parameters of the two
    addressed ions (equal length).  Modes with theta_im = -theta_jm cancel
    exactly; the bound is 1 at zero theta and decreases monotonically in
    |theta_im + theta_jm| and in the gate count.
    """
    if n_gates < 1:
        raise InputError(f"gate count must be >= 1, got {n_gates}")
    ti = np.atleast_1d(np.asarray(theta_i, dtype=float))
    tj = np.atleast_1d(np.asarray(theta_j, dtype=float))
    if ti.shape != tj.shape:
        raise InputError("theta lists must have equal length")
    a = (n_gates * math.pi / 2.0) * (ti + tj)
    return 0.5 + 0.5 * float(np.prod(1.0 / np.sqrt(1.0 + a * a)))


@dataclass(frozen=True)
class GateFidelityEstimate:
    """Monte-Carlo thermal-ensemble gate fidelity.

    ``f_parity`` estimates the fidelity obtained from subspace population
    plus parity-fringe contrast on the thermal ensemble (the quantity the
    product-form bound reproduces exactly).  ``f_overlap`` is the plain
    thermally averaged state overlap <cos^2(angle error)>, which is lower
    because the ensemble also accumulates a mean phase.
    """

    f_parity: float
    f_parity_stderr: float
    f_overlap: float
    f_overlap_stderr: float
    n_samples: int
    seed: int


def gate_fidelity_monte_carlo(
    theta_i,
    theta_j,
    n_gates: int = 1,
    n_samples: int = 100_000,
    seed: int = 0,
) -> GateFidelityEstimate:
    """Sample the gate outcome over thermal mode energies.

    Per sample, each mode energy u_m ~ Exponential(1) (same per-mode stream
    rule as the Rabi oracle) shifts the accumulated angle error by
    ``2 chi (theta_im + theta_jm) u_m`` in the doubled (parity) rotation
    frame.  From the sample phasor e^(i y):

    - ``f_parity = (1 + |mean phasor|) / 2``; its modulus is the parity
      fringe contrast of the ensemble.
    - ``f_overlap = (1 + mean cos y) / 2 = <cos^2(y/2)>``.

    Deterministic for a given seed.
    """
    if n_gates < 1:
        raise InputError(f"gate count must be >= 1, got {n_gates}")
    if n_samples < 2:
        raise InputError("n_samples must be >= 2")
    ti = np.atleast_1d(np.asarray(theta_i, dtype=float))
    tj = np.atleast_1d(np.asarray(theta_j, dtype=float))
    if ti.shape != tj.shape:
        raise InputError("theta lists must have equal length")
    joint = ti + tj
    u = _mode_energy_samples(len(joint), n_samples, seed)
    y = (n_gates * math.pi / 2.0) * (joint @ u)
    cos_y = np.cos(y)
    sin_y = np.sin(y)
    c, s = cos_y.mean(), sin_y.mean()
    var_c = cos_y.var(ddof=1) / n_samples
    var_s = sin_y.var(ddof=1) / n_samples
    cov_cs = np.cov(cos_y, sin_y, ddof=1)[0, 1] / n_samples
    radius = math.hypot(c, s)
    if radius > 0:
        var_r = (c * c * var_c + s * s * var_s + 2 * c * s * cov_cs) / (radius * radius)
    else:
        var_r = var_c + var_s
    f_overlap = 0.5 * (1.0 + c)
    return GateFidelityEstimate(
        f_parity=0.5 * (1.0 + radius),
        f_parity_stderr=0.5 * math.sqrt(max(var_r, 0.0)),
        f_overlap=f_overlap,
        f_overlap_stderr=0.5 * math.sqrt(var_c),
        n_samples=n_samples,
        seed=seed,
    )


def parity_fidelity(p00: float, p11: float, contrast: float) -> float:
    """Bell-state fidelity (p00 + p11 + C)/2 from populations and parity contrast."""
    if not (0.0 <= p00 <= 1.0 and 0.0 <= p11 <= 1.0):
        raise InputError("populations must lie in [0, 1]")
    if p00 + p11 > 1.0 + 1e-12:
        raise InputError("p00 + p11 must not exceed 1")
    if not 0.0 <= contrast <= 1.0:
        raise InputError("parity contrast must lie in [0, 1]")
    return 0.5 * (p00 + p11 + contrast)


@dataclass(frozen=True)
class SpamMatrix:
    """Row-stochastic confusion matrix between prepared and measured states.

    Rows index the prepared two-qubit states (00, 01, 10, 11); columns the
    measured outcomes.  ``uncertainty`` holds per-entry binomial standard
    errors when constructed from counts.
    """

    matrix: np.ndarray
    uncertainty: np.ndarray | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if m.shape != (4, 4):
            raise InputError(f"confusion matrix must be 4x4, got {m.shape}")
        if np.any(m < 0) or np.any(m > 1):
            raise InputError("confusion-matrix entries must lie in [0, 1]")
        if np.any(np.abs(m.sum(axis=1) - 1.0) > SPAM_ROW_SUM_TOL):
            raise InputError("confusion-matrix rows must sum to 1")

    @classmethod
    def identity(cls) -> "SpamMatrix":
        return cls(np.eye(4))


def spam_matrix_from_counts(counts) -> SpamMatrix:
    """Build a confusion matrix from a 4x4 table of measurement counts.

    Rows are normalized by their totals; per-entry uncertainties are the
    binomial standard errors sqrt(p (1 - p) / n_row).
    """
    counts = np.asarray(counts, dtype=float)
    if counts.shape != (4, 4):
        raise InputError(f"counts table must be 4x4, got {counts.shape}")
    if np.any(counts < 0):
        raise InputError("counts must be >= 0")
    totals = counts.sum(axis=1)
    if np.any(totals <= 0):
        raise InputError("every prepared state needs at least one trial")
    probs = counts / totals[:, None]
    sigma = np.sqrt(probs * (1.0 - probs) / totals[:, None])
    return SpamMatrix(matrix=probs, uncertainty=sigma)


def apply_spam(populations, spam: SpamMatrix) -> np.ndarray:
    """Measured populations for ideal ones: row vector times confusion matrix."""
    p = np.asarray(populations, dtype=float)
    if p.shape != (4,):
        raise InputError(f"populations must be a 4-vector, got shape {p.shape}")
    if abs(p.sum() - 1.0) > 1e-9 or np.any(p < -1e-12):
        raise InputError("populations must be non-negative and sum to 1")
    return p @ spam.matrix


def spam_adjust_prediction(fidelity: float, spam_error: float) -> float:
    """Scale a predicted fidelity down by a combined SPAM error fraction.

    Multiplicative convention F * (1 - spam_error); at fidelities near 1 and
    percent-level spam_error this is indistinguishable from subtracting the
    error outright.
    """
    if not 0.0 <= spam_error < 1.0:
        raise InputError("SPAM error fraction must lie in [0, 1)")
    return fidelity * (1.0 - spam_error)


@dataclass(frozen=True)
class FidelityPrediction:
    """Gate-fidelity bound with an optional SPAM adjustment, inputs echoed."""

    f_bound: float
    f_spam_adjusted: float
    theta_i: np.ndarray
    theta_j: np.ndarray
    n_gates: int


def predict_fidelity(
    theta_i, theta_j, n_gates: int = 1, spam_error: float = 0.0
) -> FidelityPrediction:
    """Bundle the fidelity bound and its SPAM-adjusted value."""
    f = gate_fidelity_bound(theta_i, theta_j, n_gates)
    return FidelityPrediction(
        f_bound=f,
        f_spam_adjusted=spam_adjust_prediction(f, spam_error),
        theta_i=np.atleast_1d(np.asarray(theta_i, dtype=float)),
        theta_j=np.atleast_1d(np.asarray(theta_j, dtype=float)),
        n_gates=n_gates,
    )
