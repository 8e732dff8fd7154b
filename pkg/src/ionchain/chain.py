"""Axial trap potentials, ion-chain equilibria and normal modes.

A linear chain of ions in a confining axial potential V(x) has total energy

    E(x_1..x_N) = sum_i V(x_i) + sum_{i<j} q^2 / (4 pi eps0 |x_i - x_j|).

This module finds the equilibrium positions, builds the dimensionless
curvature (Hessian) matrix Q around them and diagonalizes it.  With L the
unit length of the potential and ``omega_u = sqrt(q^2/(4 pi eps0 M L^3))``
the unit frequency, the axial mode frequencies are ``omega_m =
omega_u * sqrt(lambda_m)`` where lambda_m are the eigenvalues of Q.  The
orthonormal eigenvectors b[i, m] give the participation of ion i in mode m.

All public quantities are SI unless stated otherwise.  The solver works in
units of L internally, so the convergence tolerance is expressed relative to
the characteristic Coulomb force q^2/(4 pi eps0 L^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .constants import IonSpecies
from .errors import (
    DegenerateChainError,
    DomainError,
    InputError,
    SolverError,
    UnstableChainError,
)

GRADIENT_TOLERANCE = 1e-12
"""Equilibrium criterion: max |dE/dx_i| below this, in characteristic-force
units q^2/(4 pi eps0 L^2)."""

_SIGN_TIE_EPS = 1e-12


@dataclass(frozen=True)
class HarmonicPotential:
    """Harmonic axial confinement V(x) = M omega0^2 x^2 / 2.

    Parameters
    ----------
    omega0 : float
        Angular trap frequency in rad/s, > 0.  A single ion (and the
        center-of-mass mode of any chain) oscillates at exactly omega0.
    """

    omega0: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise InputError(f"harmonic frequency must be positive, got {self.omega0}")

    def evaluate(self, x, species: IonSpecies):
        """Return (value J, gradient J/m, curvature J/m^2) at x (array ok)."""
        x = np.asarray(x, dtype=float)
        k = species.mass * self.omega0**2
        return 0.5 * k * x * x, k * x, np.broadcast_to(k, x.shape).copy()

    def unit_length(self, species: IonSpecies) -> float:
        """Length where Coulomb repulsion balances the trap force,
        (q^2/(4 pi eps0 M omega0^2))^(1/3)."""
        return (species.coulomb_energy_scale / (species.mass * self.omega0**2)) ** (1.0 / 3.0)

    def domain_halfwidth(self, species: IonSpecies) -> float:
        return math.inf


@dataclass(frozen=True)
class QuadQuarticPotential:
    """Quadratic-plus-quartic confinement V(x) = a2 x^2 + a4 x^4.

    Used to flatten the center of long chains toward uniform spacing.
    ``a2`` may be negative (double well) only if ``a4 > 0``.
    """

    a2: float
    a4: float

    def __post_init__(self):
        if not (self.a2 > 0 or self.a4 > 0):
            raise InputError("need a2 > 0 or a4 > 0 for axial confinement")

    def evaluate(self, x, species: IonSpecies):
        x = np.asarray(x, dtype=float)
        x2 = x * x
        value = self.a2 * x2 + self.a4 * x2 * x2
        grad = 2.0 * self.a2 * x + 4.0 * self.a4 * x2 * x
        curv = 2.0 * self.a2 + 12.0 * self.a4 * x2
        return value, grad, curv

    def unit_length(self, species: IonSpecies) -> float:
        k = species.coulomb_energy_scale
        if self.a2 > 0:
            return (k / (2.0 * self.a2)) ** (1.0 / 3.0)
        return (k / (4.0 * self.a4)) ** 0.2

    def domain_halfwidth(self, species: IonSpecies) -> float:
        return math.inf


@dataclass(frozen=True)
class EquispacedLogPotential:
    """The axial potential that holds an N-ion chain at uniform spacing d.

    In the continuum limit the Coulomb field of a line charge q/d spanning
    [-Nd/2, Nd/2] is exactly cancelled by

        V(x) = q^2/(4 pi eps0 d) * ln[ (N/2)^2 / ((N/2)^2 - (x/d)^2) ],

    so a long chain sits at (nearly) equal spacing.  Valid for |x| < (N/2) d.
    """

    n_ions: int
    spacing: float

    def __post_init__(self):
        if self.n_ions < 2:
            raise InputError(f"equispaced potential needs n_ions >= 2, got {self.n_ions}")
        if not self.spacing > 0:
            raise InputError(f"ion spacing must be positive, got {self.spacing}")

    def evaluate(self, x, species: IonSpecies):
        x = np.asarray(x, dtype=float)
        d = self.spacing
        h = 0.5 * self.n_ions
        u = x / d
        if np.any(np.abs(u) >= h):
            raise DomainError(
                f"position outside potential domain |x| < {h * d:.6g} m"
            )
        k = species.coulomb_energy_scale / d  # energy scale, J
        h2 = h * h
        denom = h2 - u * u
        value = k * np.log(h2 / denom)
        grad = (k / d) * 2.0 * u / denom
        curv = (k / (d * d)) * 2.0 * (h2 + u * u) / (denom * denom)
        return value, grad, curv

    def unit_length(self, species: IonSpecies) -> float:
        return self.spacing

    def domain_halfwidth(self, species: IonSpecies) -> float:
        return 0.5 * self.n_ions * self.spacing


TrapPotential = Union[HarmonicPotential, QuadQuarticPotential, EquispacedLogPotential]


def potential_eval(potential: TrapPotential, x, species: IonSpecies):
    """Evaluate a trap potential: returns (value, gradient, curvature) at x."""
    return potential.evaluate(x, species)


@dataclass(frozen=True)
class EquilibriumChain:
    """Equilibrium configuration of a chain: sorted positions plus metadata.

    ``residual`` is the largest energy-gradient component at the solution in
    characteristic-force units q^2/(4 pi eps0 L^2); ``find_equilibrium``
    guarantees it is below :data:`GRADIENT_TOLERANCE`.
    """

    species: IonSpecies
    potential: TrapPotential
    positions: np.ndarray
    residual: float = 0.0

    @property
    def n_ions(self) -> int:
        return len(self.positions)

    @property
    def unit_length(self) -> float:
        return self.potential.unit_length(self.species)


@dataclass(frozen=True)
class ModeDecomposition:
    """Axial normal modes of an ion chain.

    Attributes
    ----------
    species : IonSpecies
        Ion species the modes belong to (fixes the mass in derived scales).
    frequencies : np.ndarray
        Mode angular frequencies omega_m in rad/s, sorted ascending, > 0.
    participation : np.ndarray
        Orthonormal eigenvectors b[i, m] (ion i, mode m).  Signs are fixed so
        that sum_i b[i, m] >= 0; exact ties fall back to making the first
        component of magnitude above 1e-12 positive.
    unit_frequency : float
        omega_u such that frequencies = omega_u * sqrt(eigenvalues).
    """

    species: IonSpecies
    frequencies: np.ndarray
    participation: np.ndarray
    unit_frequency: float

    @property
    def n_ions(self) -> int:
        return self.participation.shape[0]

    @property
    def n_modes(self) -> int:
        return self.participation.shape[1]

    def mode_vector(self, m: int) -> np.ndarray:
        return self.participation[:, m]

    def uniform_drive_weights(self) -> np.ndarray:
        """(sum_i b[i, m])^2 per mode: how strongly a spatially uniform force
        couples to each mode.  Bounded by N, with equality only for a uniform
        mode vector."""
        s = self.participation.sum(axis=0)
        return s * s


def single_ion_modes(species: IonSpecies, omega0: float) -> ModeDecomposition:
    """Trivial one-ion decomposition: one mode at the trap frequency."""
    if not omega0 > 0:
        raise InputError(f"trap frequency must be positive, got {omega0}")
    return ModeDecomposition(
        species=species,
        frequencies=np.array([omega0]),
        participation=np.array([[1.0]]),
        unit_frequency=omega0,
    )


# ----------------------------------------------------------------------
# dimensionless energy model used by the equilibrium solver
# ----------------------------------------------------------------------

def _scaled_trap(potential: TrapPotential, species: IonSpecies):
    """Trap gradient/curvature in units of L and q^2/(4 pi eps0 L)."""
    L = potential.unit_length(species)
    k = species.coulomb_energy_scale

    def grad_curv(u):
        _, g, c = potential.evaluate(u * L, species)
        return g * (L * L / k), c * (L**3 / k)

    halfwidth = potential.domain_halfwidth(species) / L
    return grad_curv, halfwidth


def _coulomb_grad(u: np.ndarray) -> np.ndarray:
    r = u[:, None] - u[None, :]
    np.fill_diagonal(r, np.inf)
    return -np.sum(np.sign(r) / (r * r), axis=1)


def _chain_gradient(u, grad_curv) -> np.ndarray:
    g_trap, _ = grad_curv(u)
    return g_trap + _coulomb_grad(u)


def _chain_hessian(u, grad_curv) -> np.ndarray:
    _, c_trap = grad_curv(u)
    r = u[:, None] - u[None, :]
    np.fill_diagonal(r, np.inf)
    off = -2.0 / np.abs(r) ** 3
    H = off.copy()
    np.fill_diagonal(H, c_trap - off.sum(axis=1))
    return H


def _initial_guess(potential: TrapPotential, species: IonSpecies, n: int) -> np.ndarray:
    """Uniform-spacing starting configuration in units of L."""
    idx = np.arange(n) - 0.5 * (n - 1)
    if isinstance(potential, EquispacedLogPotential):
        return idx.astype(float)
    if isinstance(potential, QuadQuarticPotential) and potential.a2 <= 0:
        # quartic-dominated: chain extent from edge-ion force balance
        extent = (0.4 * n * n) ** 0.2
        return idx * (2.0 * extent / max(n - 1, 1))
    # harmonic-chain scaling: central spacing ~ 2.018 N^-0.559 in units of L
    return idx * (2.018 / n**0.559)


def find_equilibrium(
    species: IonSpecies,
    potential: TrapPotential,
    n_ions: int | None = None,
    max_iterations: int = 200,
) -> EquilibriumChain:
    """Find the classical equilibrium positions of an N-ion chain.

    Damped Newton iteration on the energy gradient, starting from a uniformly
    spaced guess; steps that fail to reduce the gradient norm (or leave the
    potential domain, or reorder ions) are backtracked, falling back to a
    steepest-descent direction when the Newton step is not a descent
    direction.  Deterministic for given inputs.

    Parameters
    ----------
    species, potential :
        Ion species and axial confinement model.
    n_ions : int, optional
        Number of ions.  For :class:`EquispacedLogPotential` this defaults to
        the potential's own ``n_ions`` and must match it if given.

    Returns
    -------
    EquilibriumChain
        Positions sorted ascending with max scaled gradient below
        :data:`GRADIENT_TOLERANCE`.

    Raises
    ------
    SolverError
        If the residual tolerance is not met within ``max_iterations``.
    """
    if isinstance(potential, EquispacedLogPotential):
        if n_ions is None:
            n_ions = potential.n_ions
        elif n_ions != potential.n_ions:
            raise InputError(
                f"n_ions={n_ions} conflicts with potential designed for {potential.n_ions}"
            )
    if n_ions is None:
        raise InputError("n_ions is required for this potential")
    if n_ions < 1:
        raise InputError(f"need at least one ion, got {n_ions}")

    L = potential.unit_length(species)
    grad_curv, halfwidth = _scaled_trap(potential, species)

    if n_ions == 1:
        # single ion: minimize the bare trap potential (Newton in 1D)
        u = 0.0
        for _ in range(max_iterations):
            g, c = grad_curv(np.array([u]))
            if abs(g[0]) < GRADIENT_TOLERANCE:
                return EquilibriumChain(species, potential, np.array([u * L]), abs(g[0]))
            u -= g[0] / c[0] if c[0] > 0 else math.copysign(0.1, g[0])
        raise SolverError("single-ion minimization did not converge", residual=abs(g[0]))

    u = _initial_guess(potential, species, n_ions)

    def valid(v):
        return np.all(np.diff(v) > 0) and np.all(np.abs(v) < halfwidth)

    g = _chain_gradient(u, grad_curv)
    res = float(np.max(np.abs(g)))
    for _ in range(max_iterations):
        if res < GRADIENT_TOLERANCE:
            return EquilibriumChain(species, potential, u * L, res)
        H = _chain_hessian(u, grad_curv)
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            step = -g
        if np.dot(step, g) >= 0:  # not a descent direction
            step = -g
        scale = 1.0
        best = None
        for _ in range(60):
            cand = u + scale * step
            if valid(cand):
                g_cand = _chain_gradient(cand, grad_curv)
                r_cand = float(np.max(np.abs(g_cand)))
                if r_cand < res:
                    best = (cand, g_cand, r_cand)
                    break
            scale *= 0.5
        if best is None:
            # gradient-descent rescue with fresh backtracking
            step = -g
            scale = 0.5 / max(res, 1.0)
            for _ in range(80):
                cand = u + scale * step
                if valid(cand):
                    g_cand = _chain_gradient(cand, grad_curv)
                    r_cand = float(np.max(np.abs(g_cand)))
                    if r_cand < res:
                        best = (cand, g_cand, r_cand)
                        break
                scale *= 0.5
        if best is None:
            raise SolverError(
                "equilibrium search stalled", residual=res, positions=u * L
            )
        u, g, res = best
    if res < GRADIENT_TOLERANCE:
        return EquilibriumChain(species, potential, u * L, res)
    raise SolverError(
        f"equilibrium not converged after {max_iterations} iterations",
        residual=res,
        positions=u * L,
    )


def chain_gradient(chain: EquilibriumChain) -> np.ndarray:
    """Energy gradient dE/dx_i at the chain positions, in N (SI).

    Provided so that callers and tests can audit equilibrium quality
    independently of the solver.
    """
    grad_curv, _ = _scaled_trap(chain.potential, chain.species)
    L = chain.unit_length
    k = chain.species.coulomb_energy_scale
    u = chain.positions / L
    if len(u) == 1:
        g, _ = grad_curv(u)
        return g * (k / L**2)
    return _chain_gradient(u, grad_curv) * (k / L**2)


def hessian_matrix(chain: EquilibriumChain) -> np.ndarray:
    """Dimensionless curvature matrix Q of the chain energy.

    Q = (4 pi eps0 L^3 / q^2) * d2E/dx_i dx_j evaluated at the equilibrium,
    with L the potential's unit length.  The diagonal combines the scaled
    trap curvature with Coulomb terms ``sum_j 2 L^3/|x_i-x_j|^3``; off
    diagonals are ``-2 L^3/|x_i-x_j|^3``, so every Coulomb row sums to zero.

    Raises
    ------
    DegenerateChainError
        If two positions coincide (Coulomb curvature diverges).
    """
    x = np.asarray(chain.positions, dtype=float)
    if len(x) > 1 and np.min(np.diff(np.sort(x))) <= 0.0:
        raise DegenerateChainError("coincident ion positions")
    L = chain.unit_length
    grad_curv, _ = _scaled_trap(chain.potential, chain.species)
    u = x / L
    if len(u) == 1:
        _, c = grad_curv(u)
        return np.array([[c[0]]])
    return _chain_hessian(u, grad_curv)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so each column sum is non-negative."""
    out = vectors.copy()
    for m in range(out.shape[1]):
        s = out[:, m].sum()
        if s < -_SIGN_TIE_EPS:
            out[:, m] = -out[:, m]
        elif abs(s) <= _SIGN_TIE_EPS:
            nonzero = np.nonzero(np.abs(out[:, m]) > _SIGN_TIE_EPS)[0]
            if len(nonzero) and out[nonzero[0], m] < 0:
                out[:, m] = -out[:, m]
    return out


def normal_modes(chain: EquilibriumChain) -> ModeDecomposition:
    """Diagonalize the chain Hessian into axial normal modes.

    Frequencies are ``omega_u * sqrt(lambda_m)`` with ``omega_u =
    sqrt(q^2/(4 pi eps0 M L^3))``; for a harmonic trap the unit length makes
    omega_u equal the trap frequency, so the lowest mode is the
    center-of-mass mode at exactly omega0 with uniform participation.

    Raises
    ------
    UnstableChainError
        If any eigenvalue is not positive (saddle or unstable configuration).
    """
    Q = hessian_matrix(chain)
    eigenvalues, vectors = np.linalg.eigh(Q)
    if eigenvalues[0] <= 0:
        raise UnstableChainError(
            f"non-positive curvature eigenvalue {eigenvalues[0]:.3e}"
        )
    L = chain.unit_length
    omega_u = math.sqrt(
        chain.species.coulomb_energy_scale / (chain.species.mass * L**3)
    )
    return ModeDecomposition(
        species=chain.species,
        frequencies=omega_u * np.sqrt(eigenvalues),
        participation=_fix_signs(vectors),
        unit_frequency=omega_u,
    )


def lowest_mode_scan(
    species: IonSpecies, spacing: float, n_list: Sequence[int]
) -> np.ndarray:
    """Lowest axial mode frequency vs ion number for equispaced chains.

    Returns an array of shape (len(n_list), 2) with columns (N, omega_0 in
    rad/s).  Each entry solves the equilibrium for the uniform-spacing
    potential designed for that N and diagonalizes the resulting Hessian.
    """
    rows = []
    for n in n_list:
        if n < 2:
            raise InputError(f"scan requires N >= 2, got {n}")
        chain = find_equilibrium(species, EquispacedLogPotential(int(n), spacing))
        modes = normal_modes(chain)
        rows.append((float(n), modes.frequencies[0]))
    return np.array(rows)


def spacing_deviation(chain: EquilibriumChain) -> float:
    """Largest distance from the nearest uniformly spaced configuration.

    Minimizes ``max_i |x_i - (a + s i)|`` over offset a and spacing s (a
    Chebyshev line fit in the ion index) and returns the minimum, in units
    of the potential's unit length.  This measures how far the chain is from
    being perfectly equispaced, without pinning the spacing in advance.
    """
    from scipy.optimize import linprog

    x = np.asarray(chain.positions, dtype=float) / chain.unit_length
    n = len(x)
    if n < 3:
        return 0.0
    idx = np.arange(n, dtype=float)
    ones = np.ones(n)
    # variables (a, s, t): minimize t subject to |x_i - a - s i| <= t
    c = np.array([0.0, 0.0, 1.0])
    A_ub = np.vstack(
        [
            np.column_stack([-ones, -idx, -ones]),
            np.column_stack([ones, idx, -ones]),
        ]
    )
    b_ub = np.concatenate([-x, x])
    result = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * 3, method="highs")
    if not result.success:
        raise SolverError("uniform-chain fit failed: " + result.message)
    return float(result.x[2])
