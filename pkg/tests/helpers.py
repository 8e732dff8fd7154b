"""Independent numerical oracles used by the tests.

Everything here is deliberately written from first principles (finite
differences, coordinate descent, direct energy sums) so that it shares no
code path with the implementations it checks.
"""

import numpy as np

from ionchain.constants import K_COULOMB


def central_diff(f, x, h):
    """Centered first derivative of a scalar function."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def chain_energy(positions, potential, species):
    """Total energy: trap plus pairwise Coulomb, by direct summation."""
    positions = np.asarray(positions, dtype=float)
    v, _, _ = potential.evaluate(positions, species)
    energy = float(np.sum(v))
    kq = K_COULOMB * (species.charge_coulomb) ** 2
    n = len(positions)
    for i in range(n):
        for j in range(i + 1, n):
            energy += kq / abs(positions[i] - positions[j])
    return energy


def chain_gradient_fd(positions, potential, species, h):
    """Centered finite-difference gradient of the total energy."""
    positions = np.asarray(positions, dtype=float)
    grad = np.zeros_like(positions)
    for i in range(len(positions)):
        up = positions.copy()
        dn = positions.copy()
        up[i] += h
        dn[i] -= h
        grad[i] = (chain_energy(up, potential, species) - chain_energy(dn, potential, species)) / (2 * h)
    return grad


def chain_hessian_fd(positions, potential, species, h):
    """Centered finite differences of the analytic-form gradient.

    The gradient itself is assembled here from the closed-form trap gradient
    and direct Coulomb sums (not the package's solver internals).
    """
    positions = np.asarray(positions, dtype=float)
    kq = K_COULOMB * (species.charge_coulomb) ** 2

    def gradient(x):
        _, g_trap, _ = potential.evaluate(x, species)
        g = np.array(g_trap, dtype=float, copy=True)
        n = len(x)
        for i in range(n):
            for j in range(n):
                if i != j:
                    r = x[i] - x[j]
                    g[i] -= kq * np.sign(r) / r**2
        return g

    n = len(positions)
    hess = np.zeros((n, n))
    for j in range(n):
        up = positions.copy()
        dn = positions.copy()
        up[j] += h
        dn[j] -= h
        hess[:, j] = (gradient(up) - gradient(dn)) / (2 * h)
    return 0.5 * (hess + hess.T)


def coordinate_descent_minimum(positions0, potential, species, sweeps=400):
    """Minimize the chain energy one coordinate at a time (golden section).

    Slow but independent of any gradient information; used to validate the
    Newton equilibrium for small chains.
    """
    gold = (np.sqrt(5.0) - 1.0) / 2.0
    x = np.asarray(positions0, dtype=float).copy()
    scale = max(np.ptp(x) / max(len(x) - 1, 1), 1e-9)
    step = 0.5 * scale
    for sweep in range(sweeps):
        moved = 0.0
        for i in range(len(x)):
            lo, hi = x[i] - step, x[i] + step

            def f(xi):
                trial = x.copy()
                trial[i] = xi
                return chain_energy(trial, potential, species)

            a, b = lo, hi
            c = b - gold * (b - a)
            d = a + gold * (b - a)
            fc, fd = f(c), f(d)
            for _ in range(60):
                if fc < fd:
                    b, d, fd = d, c, fc
                    c = b - gold * (b - a)
                    fc = f(c)
                else:
                    a, c, fc = c, d, fd
                    d = a + gold * (b - a)
                    fd = f(d)
            best = 0.5 * (a + b)
            moved = max(moved, abs(best - x[i]))
            x[i] = best
        step = max(2.5 * moved, step * 0.3)
        if moved < 1e-13 * scale:
            break
    return np.sort(x)
