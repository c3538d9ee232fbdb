"""
Wronsk Oracle Module

Independent reference spectra used to check the shooting solver:
  - closed-form Pöschl–Teller energies εₙ = -½(λ - 1 - n)², λ = ½(1 + √(1 + 8v₀))
  - a second-order finite-difference Hamiltonian with Dirichlet walls,
    diagonalized with scipy's tridiagonal eigensolver
"""

import logging
import math

import numpy as np
from scipy import linalg

from ..errors import ParameterError
from .potential import Potential

logger = logging.getLogger("wronsk.oracle")

# εₙ = 0 is a threshold state, not a bound state.
_MARGINAL = 1e-12


def poschl_teller_lambda(v0: float) -> float:
    return 0.5 * (1.0 + math.sqrt(1.0 + 8.0 * v0))


def exact_poschl_teller(v0: float) -> list[float]:
    """
    Closed-form bound-state energies of v(x) = -v₀ sech²(x), ascending.

    Args:
        v0: Well depth, > 0.

    Returns:
        εₙ for every integer n with λ - 1 - n > 0. At the critical depths
        v₀ = n(n+1)/2 the top level sits at ε = 0 and is left out.
    """
    if not v0 > 0:
        raise ParameterError(f"v0 must be > 0, got {v0}")
    lam = poschl_teller_lambda(v0)
    energies = []
    n = 0
    while lam - 1.0 - n > _MARGINAL:
        energies.append(-0.5 * (lam - 1.0 - n) ** 2)
        n += 1
    return energies


def poschl_teller_critical(v0_max: float) -> list[float]:
    """Depths n(n+1)/2 ≤ v0_max at which a new level reaches ε = 0."""
    out, n = [], 1
    while n * (n + 1) / 2 <= v0_max:
        out.append(n * (n + 1) / 2)
        n += 1
    return out


def finite_difference_spectrum(
    p: Potential, x_min: float, x_max: float, n_points: int,
) -> np.ndarray:
    """
    Eigenvalues of the discretized -½ d²/dx² + v(x) below threshold.

    The n_points lattice includes both walls; φ vanishes there, so the
    matrix acts on the n_points - 2 interior nodes.
    """
    if not x_min < x_max:
        raise ParameterError(f"Need x_min < x_max, got {x_min}, {x_max}")
    if n_points < 4:
        raise ParameterError(f"n_points must be >= 4, got {n_points}")
    x = np.linspace(x_min, x_max, n_points)
    dx = x[1] - x[0]
    v = np.asarray(p(x[1:-1]), dtype=float) * np.ones(n_points - 2)

    main = 1.0 / dx ** 2 + v
    off = -0.5 / dx ** 2 * np.ones(n_points - 3)

    lower = float(np.min(v)) - 1.0
    if not lower < p.threshold:
        return np.empty(0)
    energies = linalg.eigh_tridiagonal(
        main, off, eigvals_only=True, select="v", select_range=(lower, p.threshold),
    )
    energies = np.sort(energies[energies < p.threshold])
    logger.debug("finite-difference spectrum of %s: %d levels", p.label, energies.size)
    return energies
