"""
Wronsk Integrator Module

Fixed-step fourth-order Runge–Kutta integration of the canonical pair of
    φ'' = 2 (v(x) - ε) φ
fixed by C(x₀) = S'(x₀) = 1, C'(x₀) = S(x₀) = 0, from the matching point x₀
outward in both directions.

C and S advance together as one 4-component state per step so both see the
same v(x) samples. The potential is sampled once on the half-step lattice
x₀ ± k·h/2 and the march itself runs in a numba-compiled kernel that handles
many columns (energies or coupling values) in one call.

Discontinuous potentials are not step-aligned; accuracy near a jump drops
to O(h).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from ..config import MAX_STEP, OVERFLOW_LIMIT
from ..errors import DivergenceOverflowError, GridError, IntegrationError
from .potential import Potential

logger = logging.getLogger("wronsk.integrator")


# ---------------------------------------------------------------------------
# GRID
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid:
    """Lattice x₀ - n_left·h, ..., x₀, ..., x₀ + n_right·h."""
    x0: float
    h: float
    n_left: int
    n_right: int

    def __post_init__(self):
        if not 0.0 < self.h <= MAX_STEP:
            raise GridError(f"Step h must lie in (0, {MAX_STEP}], got {self.h}")
        if self.n_left < 0 or self.n_right < 1:
            raise GridError(
                f"Need n_left >= 0 and n_right >= 1, got {self.n_left}, {self.n_right}"
            )

    @classmethod
    def spanning(cls, x_left: float, x_right: float, h: float, x0: float = 0.0) -> "Grid":
        """Smallest grid through x₀ that reaches both x_left and x_right."""
        n_left = max(0, int(math.ceil((x0 - x_left) / h - 1e-9)))
        n_right = max(1, int(math.ceil((x_right - x0) / h - 1e-9)))
        return cls(x0=x0, h=h, n_left=n_left, n_right=n_right)

    @property
    def x_left(self) -> float:
        return self.x0 - self.n_left * self.h

    @property
    def x_right(self) -> float:
        return self.x0 + self.n_right * self.h

    @property
    def size(self) -> int:
        return self.n_left + self.n_right + 1

    @property
    def nodes(self) -> np.ndarray:
        return self.x0 + self.h * np.arange(-self.n_left, self.n_right + 1)

    def index_of(self, x: float) -> int:
        """Index of the node nearest x; GridError when x is off the lattice."""
        i = int(round((x - self.x0) / self.h)) + self.n_left
        if not 0 <= i < self.size:
            raise GridError(
                f"x = {x:.6g} lies outside the grid [{self.x_left:.6g}, {self.x_right:.6g}]"
            )
        return i


@dataclass(frozen=True)
class SolutionPair:
    """C, C', S, S' sampled on every grid node at one energy."""
    grid: Grid
    c: np.ndarray
    c_prime: np.ndarray
    s: np.ndarray
    s_prime: np.ndarray
    energy: float

    def node(self, i: int) -> tuple[float, float, float, float]:
        return (float(self.c[i]), float(self.c_prime[i]),
                float(self.s[i]), float(self.s_prime[i]))

    def wronskian_cs(self) -> np.ndarray:
        """W(C, S) at every node; 1 up to integration error."""
        return self.c * self.s_prime - self.s * self.c_prime


# ---------------------------------------------------------------------------
# RIGHT-HAND SIDE AND REFERENCE STEPPER
# ---------------------------------------------------------------------------

def rhs(x: float, y: float, y_prime: float, p: Potential, eps: float) -> tuple[float, float]:
    """First-order form of the eigenvalue equation: (y', 2(v(x) - ε) y)."""
    v = float(p(x))
    if not math.isfinite(v):
        raise IntegrationError(f"{p.label} is not finite at x = {x:.6g}")
    return y_prime, 2.0 * (v - eps) * y


def integrate_solution(
    p: Potential, eps: float, grid: Grid, y0: float, y0_prime: float,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Reference RK4 for one solution with arbitrary data (y0, y0') at x₀.

    Calls `rhs` directly; slower than the compiled pair kernel and used to
    cross-check it.
    """
    y = np.empty(grid.size)
    yp = np.empty(grid.size)
    i0 = grid.n_left
    y[i0], yp[i0] = y0, y0_prime
    for direction, count in ((+1, grid.n_right), (-1, grid.n_left)):
        step = direction * grid.h
        u, up = y0, y0_prime
        for j in range(count):
            x = grid.x0 + j * step
            k1 = rhs(x, u, up, p, eps)
            k2 = rhs(x + 0.5 * step, u + 0.5 * step * k1[0], up + 0.5 * step * k1[1], p, eps)
            k3 = rhs(x + 0.5 * step, u + 0.5 * step * k2[0], up + 0.5 * step * k2[1], p, eps)
            k4 = rhs(x + step, u + step * k3[0], up + step * k3[1], p, eps)
            u = u + step / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            up = up + step / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            y[i0 + direction * (j + 1)] = u
            yp[i0 + direction * (j + 1)] = up
    return y, yp


# ---------------------------------------------------------------------------
# COMPILED KERNEL
# ---------------------------------------------------------------------------

@njit(cache=True, nogil=True)
def _rk4_step(y, yp, qa, qb, qc, h):
    half = 0.5 * h
    k1y = yp
    k1p = qa * y
    k2y = yp + half * k1p
    k2p = qb * (y + half * k1y)
    k3y = yp + half * k2p
    k3p = qb * (y + half * k2y)
    k4y = yp + h * k3p
    k4p = qc * (y + h * k3y)
    sixth = h / 6.0
    return (y + sixth * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
            yp + sixth * (k1p + 2.0 * k2p + 2.0 * k3p + k4p))


@njit(cache=True, nogil=True)
def _march_kernel(q, h, limit, c, cp, s, sp, blown):
    n_steps = c.shape[0] - 1
    for j in range(q.shape[1]):
        y0, p0, y1, p1 = 1.0, 0.0, 0.0, 1.0
        c[0, j] = y0
        cp[0, j] = p0
        s[0, j] = y1
        sp[0, j] = p1
        blown[j] = -1
        for i in range(n_steps):
            qa = q[2 * i, j]
            qb = q[2 * i + 1, j]
            qc = q[2 * i + 2, j]
            y0, p0 = _rk4_step(y0, p0, qa, qb, qc, h)
            y1, p1 = _rk4_step(y1, p1, qa, qb, qc, h)
            if not (abs(y0) <= limit and abs(p0) <= limit
                    and abs(y1) <= limit and abs(p1) <= limit):
                blown[j] = i + 1
                for r in range(i + 1, n_steps + 1):
                    c[r, j] = np.nan
                    cp[r, j] = np.nan
                    s[r, j] = np.nan
                    sp[r, j] = np.nan
                break
            c[i + 1, j] = y0
            cp[i + 1, j] = p0
            s[i + 1, j] = y1
            sp[i + 1, j] = p1


@dataclass(frozen=True)
class PairSweep:
    """Canonical pair for many columns along one marching direction."""
    c: np.ndarray           # (n_steps + 1, m)
    c_prime: np.ndarray
    s: np.ndarray
    s_prime: np.ndarray
    blown: np.ndarray       # (m,) first overflowed node, -1 if none

    def valid_through(self, node: np.ndarray) -> np.ndarray:
        """Columns whose march stayed finite up to and including `node`."""
        return (self.blown < 0) | (self.blown > node)


def half_step_lattice(x0: float, step: float, n_steps: int) -> np.ndarray:
    """x₀ + k·step/2 for k = 0 .. 2·n_steps (step may be negative)."""
    return x0 + 0.5 * step * np.arange(2 * n_steps + 1)


def march(v_lattice: np.ndarray, energies, step: float) -> PairSweep:
    """
    RK4-march the canonical pair for every column.

    Args:
        v_lattice: v on the half-step lattice, shape (2n+1,) shared by all
            columns or (2n+1, m) with one potential per column.
        energies: scalar or (m,) energies.
        step: signed step (negative marches leftward).

    Returns:
        PairSweep with n+1 nodes; overflowed columns are NaN past their
        `blown` node.
    """
    v = np.asarray(v_lattice, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    eps = np.atleast_1d(np.asarray(energies, dtype=float))
    q = np.ascontiguousarray(2.0 * (v - eps[None, :]))
    n_nodes = (q.shape[0] - 1) // 2 + 1
    m = q.shape[1]
    c, cp, s, sp = (np.empty((n_nodes, m)) for _ in range(4))
    blown = np.empty(m, dtype=np.int64)
    _march_kernel(q, float(step), OVERFLOW_LIMIT, c, cp, s, sp, blown)
    return PairSweep(c=c, c_prime=cp, s=s, s_prime=sp, blown=blown)


def sample_lattice(p: Potential, x0: float, step: float, n_steps: int) -> np.ndarray:
    """v on the half-step lattice; IntegrationError on non-finite samples."""
    xs = half_step_lattice(x0, step, n_steps)
    v = np.asarray(p(xs), dtype=float) * np.ones_like(xs)
    bad = ~np.isfinite(v)
    if bad.any():
        raise IntegrationError(f"{p.label} is not finite at x = {xs[bad][0]:.6g}")
    return v


# ---------------------------------------------------------------------------
# CANONICAL PAIR
# ---------------------------------------------------------------------------

def integrate_pair(p: Potential, eps: float, grid: Grid) -> SolutionPair:
    """
    C, S and derivatives on every node of `grid` at energy ε.

    Raises:
        DivergenceOverflowError: a component exceeded the overflow guard.
    """
    right = march(sample_lattice(p, grid.x0, grid.h, grid.n_right), eps, grid.h)
    left = march(sample_lattice(p, grid.x0, -grid.h, grid.n_left), eps, -grid.h)

    for sweep, sign in ((right, +1), (left, -1)):
        if sweep.blown[0] >= 0:
            node = int(sweep.blown[0])
            index = grid.n_left + sign * node
            raise DivergenceOverflowError(index, grid.x0 + sign * node * grid.h)

    def join(lhs: np.ndarray, rhs_: np.ndarray) -> np.ndarray:
        return np.concatenate([lhs[:0:-1, 0], rhs_[:, 0]])

    pair = SolutionPair(
        grid=grid,
        c=join(left.c, right.c),
        c_prime=join(left.c_prime, right.c_prime),
        s=join(left.s, right.s),
        s_prime=join(left.s_prime, right.s_prime),
        energy=float(eps),
    )
    logger.debug("integrated pair at eps=%.12g on %d nodes", eps, grid.size)
    return pair
