"""
Wronsk Solver Module

Root finding over energy (bound states) and over coupling strength
(critical values), plus wavefunction assembly.

Process for find_bound_states:
    1. Scan the quantization condition on a uniform ε lattice
       (even/odd Wronskians for even potentials, the determinant otherwise)
    2. Bracket every sign change
    3. Refine all brackets together by bisection (or Brent on request)
    4. Record B₃, the residual and the parity of each root

Every scan column (one energy or one coupling value) is an independent
march of the canonical pair; columns are evaluated in batches by the
compiled kernel and, with jobs > 1, in parallel chunks merged in order.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import optimize

from ..config import (
    AUTO_TAIL_TOL, DECAY_LENGTHS, LOW_CONFIDENCE_KX, TAIL_CLAMP, THRESHOLD_GAP,
    THRESHOLD_K, X_EVAL_CAP,
)
from ..errors import (
    BracketError, ContinuumError, ConvergenceError, DegenerateInputError,
    IntegrationError, ParameterError, TailError, UnsupportedDiagnosticError,
)
from ..schemas import BoundState, CriticalCoupling, SolverOptions, StateParity
from .integrator import Grid, integrate_pair, march, sample_lattice
from .oracle import exact_poschl_teller  # noqa: F401  (re-exported)
from .potential import Family, Parity, Potential, sample_minimum, tail_cut
from .wronskian import (
    Side, basis_pair, convergent_coefficient, divergent_coefficient,
    tail_functions, wronskian,
)

logger = logging.getLogger("wronsk.solver")

__all__ = [
    "ScanTable", "Wavefunction", "scan_energy", "scan_coupling", "scan_position",
    "refine_root", "condition_function", "find_bound_states", "critical_couplings",
    "wavefunction", "sign_change_brackets", "energy_window",
    "exact_poschl_teller",
]


# ---------------------------------------------------------------------------
# SCAN TABLE
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanTable:
    """
    Rows of (abscissa, condition values). Only finite rows are kept; the
    abscissae of rows lost to overflow are listed in `skipped`.
    """
    abscissa_name: str                 # energy | v0 (coupling name) | x
    abscissa: np.ndarray
    columns: dict[str, np.ndarray]     # even/odd, det, or w_conv_c/w_conv_s
    kind: str                          # parity | general | position
    skipped: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __len__(self) -> int:
        return int(self.abscissa.size)

    def to_frame(self) -> pd.DataFrame:
        data = {self.abscissa_name: self.abscissa}
        data.update(self.columns)
        return pd.DataFrame(data)


class _Conditions(NamedTuple):
    lc_c: np.ndarray        # W(L_c, C) at the left read point
    lc_s: np.ndarray
    rc_c: np.ndarray        # W(R_c, C) at the right read point
    rc_s: np.ndarray
    k_left: np.ndarray
    k_right: np.ndarray
    x_left: np.ndarray
    x_right: np.ndarray
    ok: np.ndarray

    @property
    def even(self) -> np.ndarray:
        return self.rc_c

    @property
    def odd(self) -> np.ndarray:
        return self.rc_s

    @property
    def det(self) -> np.ndarray:
        return self.lc_c * self.rc_s - self.rc_c * self.lc_s

    def column(self, name: str) -> np.ndarray:
        return getattr(self, name)


def _concat(parts: Sequence[_Conditions]) -> _Conditions:
    return _Conditions(*(np.concatenate(arrays) for arrays in zip(*parts)))


# ---------------------------------------------------------------------------
# BATCHED CONDITION EVALUATION
# ---------------------------------------------------------------------------

class _Problem:
    """
    Columns of a scan: each value maps to a potential and an energy.
    Subclasses say how; this class integrates and reads the Wronskians.
    """

    def __init__(self, opts: SolverOptions, symmetric: bool):
        self.opts = opts
        self.symmetric = symmetric
        self.kind = "parity" if symmetric else "general"
        self.condition_names = ("even", "odd") if symmetric else ("det",)
        # set once a tail has not settled by X_EVAL_CAP
        self.unsettled = False

    # -- subclass hooks ------------------------------------------------------

    def columns(self, values: np.ndarray):
        """(Potential or list of Potential, energies) for the given values."""
        raise NotImplementedError

    def _cut(self, values: np.ndarray, j: int):
        raise NotImplementedError

    # -- read points ---------------------------------------------------------

    def _decay_rates(self, values: np.ndarray, side: Side) -> np.ndarray:
        pots, eps = self.columns(values)
        if isinstance(pots, Potential):
            limit = np.full(eps.shape, pots.limit(+1 if side is Side.RIGHT else -1))
        else:
            limit = np.array([q.limit(+1 if side is Side.RIGHT else -1) for q in pots])
        return np.sqrt(np.maximum(2.0 * (limit - eps), 0.0))

    def distances(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """
        Read distances (left, right) from the origin for every column.

        Explicit x_eval is used on both sides. Auto picks
        max(tail cut at 1e-10, 6/k) capped at 50 per side; a potential
        that has not settled by 50 is read at 50.
        """
        m = values.size
        if self.opts.x_eval is not None:
            fixed = np.full(m, float(self.opts.x_eval))
            return fixed, fixed.copy()
        out = []
        for side in (Side.LEFT, Side.RIGHT):
            k = self._decay_rates(values, side)
            d = np.full(m, X_EVAL_CAP)
            for j in range(m):
                if k[j] < THRESHOLD_K or DECAY_LENGTHS / k[j] >= X_EVAL_CAP:
                    continue
                try:
                    cut = self._cut(values, j)
                except TailError as exc:
                    if not self.unsettled:
                        logger.warning("%s; reading the tails at x_eval = %g", exc, X_EVAL_CAP)
                    self.unsettled = True
                    continue
                settle = cut.left if side is Side.LEFT else cut.right
                d[j] = min(max(settle, DECAY_LENGTHS / k[j]), X_EVAL_CAP)
            out.append(d)
        return out[0], out[1]

    def _steps(self, distance: np.ndarray, side: Side) -> np.ndarray:
        x0, h = self.opts.x0, self.opts.h
        if side is Side.RIGHT:
            steps = np.rint((distance - x0) / h).astype(np.int64)
        else:
            steps = np.rint((x0 + distance) / h).astype(np.int64)
        if np.any(steps < 1):
            raise ParameterError(
                f"Read point on the {side.value} lies on the wrong side of x0 = {x0}"
            )
        return steps

    # -- evaluation ----------------------------------------------------------

    def _lattice(self, pots, step: float, n_steps: int) -> np.ndarray:
        if isinstance(pots, Potential):
            return sample_lattice(pots, self.opts.x0, step, n_steps)
        return np.column_stack([sample_lattice(q, self.opts.x0, step, n_steps) for q in pots])

    def _side(self, pots, eps, steps: np.ndarray, side: Side):
        sign = 1.0 if side is Side.RIGHT else -1.0
        step = sign * self.opts.h
        sweep = march(self._lattice(pots, step, int(steps.max())), eps, step)
        cols = np.arange(eps.size)
        x = self.opts.x0 + sign * steps * self.opts.h
        if isinstance(pots, Potential):
            limit = np.full(eps.shape, pots.limit(int(sign)))
        else:
            limit = np.array([q.limit(int(sign)) for q in pots])
        k = np.sqrt(np.maximum(2.0 * (limit - eps), 0.0))
        t = tail_functions(k, x, side)
        c, cp = sweep.c[steps, cols], sweep.c_prime[steps, cols]
        s, sp = sweep.s[steps, cols], sweep.s_prime[steps, cols]
        w_c = wronskian(t.conv, t.conv_prime, c, cp)
        w_s = wronskian(t.conv, t.conv_prime, s, sp)
        ok = sweep.valid_through(steps) & np.isfinite(w_c) & np.isfinite(w_s)
        return w_c, w_s, k, x, ok

    def _evaluate_chunk(self, values, d_left, d_right) -> _Conditions:
        pots, eps = self.columns(values)
        rc_c, rc_s, k_r, x_r, ok = self._side(pots, eps, self._steps(d_right, Side.RIGHT), Side.RIGHT)
        if self.symmetric:
            nan = np.full(eps.size, np.nan)
            return _Conditions(nan, nan.copy(), rc_c, rc_s, k_r.copy(), k_r, -x_r, x_r, ok)
        lc_c, lc_s, k_l, x_l, ok_l = self._side(pots, eps, self._steps(d_left, Side.LEFT), Side.LEFT)
        return _Conditions(lc_c, lc_s, rc_c, rc_s, k_l, k_r, x_l, x_r, ok & ok_l)

    def evaluate(
        self,
        values: np.ndarray,
        d_left: Optional[np.ndarray] = None,
        d_right: Optional[np.ndarray] = None,
    ) -> _Conditions:
        values = np.atleast_1d(np.asarray(values, dtype=float))
        if d_left is None or d_right is None:
            d_left, d_right = self.distances(values)
        jobs = self.opts.jobs
        if jobs <= 1 or values.size < 2 * jobs:
            return self._evaluate_chunk(values, d_left, d_right)
        chunks = np.array_split(np.arange(values.size), jobs)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(
                lambda idx: self._evaluate_chunk(values[idx], d_left[idx], d_right[idx]),
                chunks,
            ))
        return _concat(parts)


class _EnergyProblem(_Problem):
    """One potential, one energy per column."""

    def __init__(self, p: Potential, opts: SolverOptions):
        super().__init__(opts, symmetric=p.parity is Parity.EVEN_SYMMETRIC and opts.x0 == 0.0)
        self.p = p
        self._tail = None

    def columns(self, values):
        return self.p, np.asarray(values, dtype=float)

    def _cut(self, values, j):
        if self._tail is None:
            self._tail = tail_cut(self.p, AUTO_TAIL_TOL)
        return self._tail


class _CouplingProblem(_Problem):
    """One family member per column, each at its own threshold energy."""

    def __init__(self, family: Family, opts: SolverOptions, reference: Potential):
        super().__init__(
            opts, symmetric=reference.parity is Parity.EVEN_SYMMETRIC and opts.x0 == 0.0,
        )
        self.family = family
        self._members: dict[float, Potential] = {}

    def member(self, value: float) -> Potential:
        value = float(value)
        if value not in self._members:
            self._members[value] = self.family(value)
        return self._members[value]

    def columns(self, values):
        pots = [self.member(v) for v in values]
        return pots, np.array([q.threshold for q in pots])

    def _cut(self, values, j):
        return tail_cut(self.member(values[j]), AUTO_TAIL_TOL)


def _table(problem: _Problem, name: str, values: np.ndarray) -> ScanTable:
    cond = problem.evaluate(values)
    finite = cond.ok.copy()
    for col in problem.condition_names:
        finite &= np.isfinite(cond.column(col))
    if not finite.all():
        logger.warning(
            "%d of %d scan rows overflowed and were skipped (first at %s = %.6g)",
            int((~finite).sum()), values.size, name, values[~finite][0],
        )
    return ScanTable(
        abscissa_name=name,
        abscissa=values[finite],
        columns={col: cond.column(col)[finite] for col in problem.condition_names},
        kind=problem.kind,
        skipped=values[~finite],
    )


# ---------------------------------------------------------------------------
# SCANS
# ---------------------------------------------------------------------------

def scan_energy(
    p: Potential, eps_min: float, eps_max: float, n_points: int,
    opts: Optional[SolverOptions] = None,
) -> ScanTable:
    """
    Quantization condition on a uniform ε lattice.

    Args:
        p: Potential.
        eps_min, eps_max: Scan window; eps_max may not exceed the threshold.
        n_points: Lattice size, >= 2.
        opts: Grid, x_eval and job options.

    Returns:
        ScanTable with columns even/odd (even potentials, x0 = 0) or det.
    """
    opts = opts or SolverOptions()
    if n_points < 2:
        raise ParameterError(f"n_points must be >= 2, got {n_points}")
    if not eps_min < eps_max:
        raise ParameterError(f"Need eps_min < eps_max, got {eps_min}, {eps_max}")
    if eps_max > p.threshold:
        raise ContinuumError(
            f"eps_max = {eps_max:.6g} lies above the threshold {p.threshold:.6g}"
        )
    energies = np.linspace(eps_min, eps_max, n_points)
    logger.info("energy scan of %s: %d points on [%.6g, %.6g]", p.label, n_points, eps_min, eps_max)
    return _table(_EnergyProblem(p, opts), "energy", energies)


def scan_coupling(
    family: Family, v_min: float, v_max: float, n_points: int,
    opts: Optional[SolverOptions] = None, name: str = "v0",
) -> ScanTable:
    """Threshold-energy condition of family(v) on a uniform coupling lattice."""
    opts = opts or SolverOptions()
    if n_points < 2:
        raise ParameterError(f"n_points must be >= 2, got {n_points}")
    if not v_min < v_max:
        raise ParameterError(f"Need {name} min < max, got {v_min}, {v_max}")
    values = np.linspace(v_min, v_max, n_points)
    problem = _CouplingProblem(family, opts, family(0.5 * (v_min + v_max)))
    logger.info("coupling scan: %d points on [%.6g, %.6g]", n_points, v_min, v_max)
    return _table(problem, name, values)


def scan_position(
    p: Potential, eps: float, x_from: float, x_to: float,
    opts: Optional[SolverOptions] = None,
) -> ScanTable:
    """
    Tail Wronskians W(conv, C), W(conv, S) against x at fixed ε.

    Nodes right of x0 use the right-side basis, nodes left of it the left one.
    Flat stretches of both columns mark the plateau region.
    """
    opts = opts or SolverOptions()
    if not x_from < x_to:
        raise ParameterError(f"Need x_from < x_to, got {x_from}, {x_to}")
    basis_left, basis_right = basis_pair(p, eps)
    grid = Grid.spanning(min(x_from, opts.x0), max(x_to, opts.x0), opts.h, opts.x0)
    pair = integrate_pair(p, eps, grid)
    lo, hi = grid.index_of(x_from), grid.index_of(x_to)
    x = grid.nodes[lo:hi + 1]
    right = x >= opts.x0
    t_r, t_l = basis_right.values(x), basis_left.values(x)
    conv = np.where(right, t_r.conv, t_l.conv)
    conv_prime = np.where(right, t_r.conv_prime, t_l.conv_prime)
    sl = slice(lo, hi + 1)
    return ScanTable(
        abscissa_name="x",
        abscissa=x,
        columns={
            "w_conv_c": wronskian(conv, conv_prime, pair.c[sl], pair.c_prime[sl]),
            "w_conv_s": wronskian(conv, conv_prime, pair.s[sl], pair.s_prime[sl]),
        },
        kind="position",
    )


# ---------------------------------------------------------------------------
# BRACKETING AND REFINEMENT
# ---------------------------------------------------------------------------

def sign_change_brackets(x: np.ndarray, f: np.ndarray) -> list[tuple[float, float]]:
    """
    Brackets (lo, hi) around each sign change of f.

    A run of exact zeros between values of opposite sign is one root, reported
    as a zero-width bracket at the middle node of the run. Zeros that do not
    separate opposite signs are ignored, so an identically zero column has no
    roots.
    """
    nonzero = np.flatnonzero(f != 0.0)
    out = []
    for i, j in zip(nonzero[:-1], nonzero[1:]):
        if np.sign(f[i]) == np.sign(f[j]):
            continue
        if j == i + 1:
            out.append((float(x[i]), float(x[j])))
        else:
            mid = (i + 1 + j - 1) // 2
            out.append((float(x[mid]), float(x[mid])))
    return out


def _bisect_batch(
    func: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lo: np.ndarray, hi: np.ndarray, f_lo: np.ndarray,
    tol: float, max_iter: int,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Bisect many brackets at once; one func call per iteration.

    func(points, idx) evaluates the condition of brackets idx at points.
    """
    lo, hi, f_lo = lo.copy(), hi.copy(), f_lo.copy()
    for _ in range(max_iter):
        active = (hi - lo) > tol
        if not active.any():
            break
        idx = np.flatnonzero(active)
        mid = 0.5 * (lo[idx] + hi[idx])
        f_mid = np.asarray(func(mid, idx), dtype=float)
        if not np.all(np.isfinite(f_mid)):
            raise IntegrationError(
                f"Non-finite condition value during refinement near {mid[~np.isfinite(f_mid)][0]:.12g}"
            )
        exact = f_mid == 0.0
        same = np.sign(f_mid) == np.sign(f_lo[idx])
        lo[idx] = np.where(exact | same, mid, lo[idx])
        hi[idx] = np.where(exact | ~same, mid, hi[idx])
        f_lo[idx] = np.where(same, f_mid, f_lo[idx])
    width = hi - lo
    if np.any(width > tol):
        bad = int(np.flatnonzero(width > tol)[0])
        raise ConvergenceError(
            f"Bisection did not reach tol={tol:g} in {max_iter} iterations",
            bracket=(float(lo[bad]), float(hi[bad])),
        )
    return 0.5 * (lo + hi), width


def refine_root(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-9,
    max_iter: int = 200,
    method: str = "bisect",
) -> float:
    """
    Root of f inside bracket.

    Bisection stops once hi - lo <= tol and returns the midpoint; with
    method="brent" scipy's brentq is used with xtol=tol.

    Raises:
        BracketError: f(lo) and f(hi) share a sign.
        ConvergenceError: max_iter exhausted (carries the last bracket).
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not tol > 0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    if lo > hi:
        lo, hi = hi, lo
    f_lo, f_hi = float(f(lo)), float(f(hi))
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketError(
            f"No sign change on [{lo:.12g}, {hi:.12g}]: f = {f_lo:.6g}, {f_hi:.6g}"
        )
    if method == "brent":
        return _brent(f, lo, hi, tol, max_iter)

    def batched(points, idx):
        return np.array([f(float(e)) for e in points])

    root, _ = _bisect_batch(batched, np.array([lo]), np.array([hi]), np.array([f_lo]), tol, max_iter)
    return float(root[0])


def _brent(f, lo, hi, tol, max_iter) -> float:
    try:
        return float(optimize.brentq(f, lo, hi, xtol=tol, maxiter=max_iter))
    except RuntimeError as exc:
        raise ConvergenceError(f"brentq failed on [{lo:.12g}, {hi:.12g}]: {exc}", (lo, hi)) from exc


class _Root(NamedTuple):
    value: float
    width: float
    condition: str
    d_left: float
    d_right: float


def _refine_brackets(
    problem: _Problem, brackets: list[tuple[float, float, str]],
) -> list[_Root]:
    """
    Refine (lo, hi, condition) brackets of a scan.

    Read distances are frozen per bracket at its starting midpoint so the
    refined function stays continuous.
    """
    if not brackets:
        return []
    opts = problem.opts
    lo = np.array([b[0] for b in brackets])
    hi = np.array([b[1] for b in brackets])
    names = [b[2] for b in brackets]
    d_left, d_right = problem.distances(0.5 * (lo + hi))

    def batched(points, idx):
        cond = problem.evaluate(points, d_left[idx], d_right[idx])
        return np.array([cond.column(names[i])[n] for n, i in enumerate(idx)])

    all_idx = np.arange(len(brackets))
    f_lo = batched(lo, all_idx)
    f_hi = batched(hi, all_idx)
    keep = (lo == hi) | (np.sign(f_lo) != np.sign(f_hi)) | (f_lo == 0.0) | (f_hi == 0.0)
    if not keep.all():
        for i in np.flatnonzero(~keep):
            logger.warning(
                "bracket [%.9g, %.9g] (%s) lost its sign change at frozen x_eval; dropped",
                lo[i], hi[i], names[i],
            )
    # exact zeros at either end collapse the bracket
    hi = np.where(f_lo == 0.0, lo, hi)
    lo = np.where(f_hi == 0.0, hi, lo)

    sel = np.flatnonzero(keep)
    if sel.size == 0:
        return []

    if opts.method == "brent":
        roots, widths = [], []
        for i in sel:
            if lo[i] == hi[i]:
                roots.append(lo[i])
                widths.append(0.0)
                continue

            def scalar(e, i=i):
                return float(batched(np.array([e]), np.array([i]))[0])

            roots.append(_brent(scalar, lo[i], hi[i], opts.tol, opts.max_iter))
            widths.append(opts.tol)
        roots, widths = np.array(roots), np.array(widths)
    else:
        def batched_sel(points, idx):
            return batched(points, sel[idx])

        roots, widths = _bisect_batch(
            batched_sel, lo[sel], hi[sel], f_lo[sel], opts.tol, opts.max_iter,
        )
    logger.info("refined %d brackets (%s)", sel.size, opts.method)
    return [
        _Root(float(r), float(w), names[i], float(d_left[i]), float(d_right[i]))
        for r, w, i in zip(roots, widths, sel)
    ]


def _brackets_of(table: ScanTable) -> list[tuple[float, float, str]]:
    out = []
    for name, values in table.columns.items():
        out.extend((lo, hi, name) for lo, hi in sign_change_brackets(table.abscissa, values))
    return out


def condition_function(
    p: Potential, condition: str = "even", opts: Optional[SolverOptions] = None,
) -> Callable[[float], float]:
    """
    Scalar quantization condition ε ↦ value, for use with refine_root.

    condition is even/odd for even potentials integrated from x0 = 0 and
    det otherwise.
    """
    problem = _EnergyProblem(p, opts or SolverOptions())
    if condition not in problem.condition_names:
        raise ParameterError(
            f"Condition {condition!r} unavailable; choose from {', '.join(problem.condition_names)}"
        )

    def f(eps: float) -> float:
        return float(problem.evaluate(np.array([eps])).column(condition)[0])

    return f


_PARITY_OF = {"even": StateParity.EVEN, "odd": StateParity.ODD, "det": StateParity.NONE}


# ---------------------------------------------------------------------------
# BOUND STATES
# ---------------------------------------------------------------------------

def energy_window(p: Potential, opts: SolverOptions) -> tuple[float, float]:
    """(floor, ceiling): sampled min of v and threshold - 1e-6 unless overridden."""
    floor = opts.eps_floor
    if floor is None:
        reach = TAIL_CLAMP[1]
        floor = sample_minimum(p, opts.x0 - reach, opts.x0 + reach, opts.h)
    ceiling = opts.eps_ceiling
    if ceiling is None:
        ceiling = p.threshold - THRESHOLD_GAP
    return float(floor), float(min(ceiling, p.threshold))


def _general_mixture(lc_c: float, lc_s: float) -> tuple[float, float]:
    """Null vector of the left condition, unit length, leading component >= 0."""
    a, b = lc_s, -lc_c
    norm = math.hypot(a, b)
    if norm == 0.0 or not math.isfinite(norm):
        return 1.0, 0.0
    a, b = a / norm, b / norm
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return a, b


def find_bound_states(p: Potential, opts: Optional[SolverOptions] = None) -> list[BoundState]:
    """
    All bound states between the energy floor and the threshold.

    Args:
        p: Potential.
        opts: h, x_eval (None = auto), energy window, n_scan, tol, method, jobs.

    Returns:
        BoundStates sorted by energy; empty when nothing binds in the window.
    """
    opts = opts or SolverOptions()

    # ------------------------------------------------------------------
    # 1. Window and scan
    # ------------------------------------------------------------------
    floor, ceiling = energy_window(p, opts)
    if not floor < ceiling:
        logger.info("%s: empty energy window [%.6g, %.6g]", p.label, floor, ceiling)
        return []
    problem = _EnergyProblem(p, opts)
    table = _table(problem, "energy", np.linspace(floor, ceiling, opts.n_scan))

    # ------------------------------------------------------------------
    # 2. Bracket and refine
    # ------------------------------------------------------------------
    roots = sorted(_refine_brackets(problem, _brackets_of(table)), key=lambda r: r.value)

    # ------------------------------------------------------------------
    # 3. Diagnostics per state
    # ------------------------------------------------------------------
    states = []
    for index, root in enumerate(roots):
        cond = problem.evaluate(
            np.array([root.value]), np.array([root.d_left]), np.array([root.d_right]),
        )
        if root.condition == "even":
            mixture = (1.0, 0.0)
        elif root.condition == "odd":
            mixture = (0.0, 1.0)
        else:
            mixture = _general_mixture(float(cond.lc_c[0]), float(cond.lc_s[0]))
        k = float(cond.k_right[0])
        x_eval = float(cond.x_right[0])
        w_conv_y = mixture[0] * float(cond.rc_c[0]) + mixture[1] * float(cond.rc_s[0])
        b_div = w_conv_y / (2.0 * k) if k >= THRESHOLD_K else float("nan")
        kx = k * x_eval
        if not problem.symmetric:
            kx = min(kx, float(cond.k_left[0]) * abs(float(cond.x_left[0])))
        low = kx < LOW_CONFIDENCE_KX or problem.unsettled
        if problem.unsettled:
            logger.warning(
                "state %d at eps=%.9g read before the potential settled; low confidence",
                index, root.value,
            )
        elif low:
            logger.warning(
                "state %d at eps=%.9g is shallow (k*x_eval = %.3g); low confidence",
                index, root.value, kx,
            )
        states.append(BoundState(
            index=index,
            energy=root.value,
            parity=_PARITY_OF[root.condition],
            residual_divergent=b_div,
            wronskian_residual=float(cond.column(root.condition)[0]),
            bracket_width=root.width,
            k=k,
            x_eval=x_eval,
            low_confidence=low,
            mixture=mixture,
        ))
    logger.info("%s: %d bound states", p.label, len(states))
    return states


# ---------------------------------------------------------------------------
# CRITICAL COUPLINGS
# ---------------------------------------------------------------------------

def critical_couplings(
    family: Family, v_min: float, v_max: float,
    opts: Optional[SolverOptions] = None, name: str = "v0",
) -> list[CriticalCoupling]:
    """
    Coupling values in [v_min, v_max] at which a state sits exactly at
    threshold, found with the threshold basis (ε = limit, k = 0).

    Uses opts.n_scan lattice points and refines to opts.tol.
    """
    opts = opts or SolverOptions()
    if not v_min < v_max:
        raise ParameterError(f"Need {name} min < max, got {v_min}, {v_max}")
    problem = _CouplingProblem(family, opts, family(0.5 * (v_min + v_max)))
    table = _table(problem, name, np.linspace(v_min, v_max, opts.n_scan))
    roots = sorted(_refine_brackets(problem, _brackets_of(table)), key=lambda r: r.value)
    return [
        CriticalCoupling(
            index=i, coupling=r.value, parity=_PARITY_OF[r.condition], bracket_width=r.width,
        )
        for i, r in enumerate(roots)
    ]


# ---------------------------------------------------------------------------
# WAVEFUNCTION
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Wavefunction:
    """φ = a2·C + b2·S on the grid, with its tail diagnostics."""
    x: np.ndarray
    phi: np.ndarray
    phi_prime: np.ndarray
    divergent_tail: np.ndarray     # B₃·R_d right of x0, B₁·L_d left of it
    energy: float
    mixture: tuple[float, float]
    k: float
    x_eval: float
    b_div: float
    a_conv: float
    truncation_x: float
    truncation_left: Optional[float] = None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "x": self.x,
            "phi": self.phi,
            "phi_prime": self.phi_prime,
            "divergent_tail": self.divergent_tail,
        })


def _truncation(x, phi, allowed, right: bool) -> float:
    """argmin |φ| beyond the outermost classically allowed node."""
    if right:
        region = np.flatnonzero(allowed)
        start = int(region[-1]) if region.size else 0
        window = np.arange(start, x.size)
    else:
        region = np.flatnonzero(allowed)
        stop = int(region[0]) if region.size else x.size - 1
        window = np.arange(0, stop + 1)
    return float(x[window[np.argmin(np.abs(phi[window]))]])


def wavefunction(
    p: Potential,
    eps: float,
    mixture: Optional[tuple[float, float]] = None,
    parity: Optional[StateParity] = None,
    opts: Optional[SolverOptions] = None,
    extent: Optional[float] = None,
) -> Wavefunction:
    """
    Sample a2·C + b2·S at energy ε.

    Args:
        mixture: (a2, b2). Defaults: (1, 0) even, (0, 1) odd; for general
            potentials the combination with no divergent left tail.
        parity: Even potentials only; picks the default mixture. When both
            are None the parity whose condition is smaller at ε is used.
        extent: Half-width of the sampled region; default twice x_eval.

    Raises:
        DegenerateInputError: mixture (0, 0).
    """
    opts = opts or SolverOptions()
    if mixture is not None and mixture[0] == 0 and mixture[1] == 0:
        raise DegenerateInputError("Mixture (0, 0) defines no wavefunction")
    if eps > p.threshold:
        raise ContinuumError(f"eps = {eps:.6g} lies above the threshold {p.threshold:.6g}")

    # ------------------------------------------------------------------
    # 1. Read points and default mixture
    # ------------------------------------------------------------------
    problem = _EnergyProblem(p, opts)
    values = np.array([float(eps)])
    d_left, d_right = problem.distances(values)
    cond = problem.evaluate(values, d_left, d_right)
    if mixture is None:
        if problem.symmetric:
            if parity is None:
                parity = (StateParity.EVEN if abs(cond.rc_c[0]) <= abs(cond.rc_s[0])
                          else StateParity.ODD)
            mixture = (0.0, 1.0) if parity is StateParity.ODD else (1.0, 0.0)
        else:
            mixture = _general_mixture(float(cond.lc_c[0]), float(cond.lc_s[0]))
    a2, b2 = float(mixture[0]), float(mixture[1])

    # ------------------------------------------------------------------
    # 2. Integrate over the sampled region
    # ------------------------------------------------------------------
    x_eval = float(cond.x_right[0])
    reach_right = extent if extent is not None else min(2.0 * x_eval, X_EVAL_CAP)
    if problem.symmetric:
        grid = Grid.spanning(0.0, max(reach_right, x_eval), opts.h, 0.0)
    else:
        reach_left = extent if extent is not None else min(2.0 * abs(float(cond.x_left[0])), X_EVAL_CAP)
        grid = Grid.spanning(
            min(-reach_left, float(cond.x_left[0])), max(reach_right, x_eval), opts.h, opts.x0,
        )
    pair = integrate_pair(p, eps, grid)
    x = grid.nodes
    phi = a2 * pair.c + b2 * pair.s
    phi_prime = a2 * pair.c_prime + b2 * pair.s_prime

    # ------------------------------------------------------------------
    # 3. Tail coefficients and truncation points
    # ------------------------------------------------------------------
    basis_left, basis_right = basis_pair(p, eps)
    try:
        b_div = divergent_coefficient(pair, basis_right, x_eval, a2, b2)
        a_conv = convergent_coefficient(pair, basis_right, x_eval, a2, b2)
    except UnsupportedDiagnosticError:
        logger.warning("eps = %.9g is at threshold; tail coefficients undefined", eps)
        b_div = a_conv = float("nan")
    b_left = float("nan")
    if grid.n_left > 0:
        try:
            b_left = divergent_coefficient(pair, basis_left, float(cond.x_left[0]), a2, b2)
        except UnsupportedDiagnosticError:
            pass

    right = x >= grid.x0
    with np.errstate(over="ignore", invalid="ignore"):
        tail = np.where(
            right,
            b_div * basis_right.values(x).div,
            b_left * basis_left.values(x).div,
        )
    allowed = np.asarray(p(x), dtype=float) * np.ones_like(x) <= eps
    truncation_x = _truncation(x[right], phi[right], allowed[right], right=True)
    truncation_left = None
    if grid.n_left > 0:
        left = x <= grid.x0
        truncation_left = _truncation(x[left], phi[left], allowed[left], right=False)

    return Wavefunction(
        x=x, phi=phi, phi_prime=phi_prime, divergent_tail=tail,
        energy=float(eps), mixture=(a2, b2), k=basis_right.k, x_eval=x_eval,
        b_div=float(b_div), a_conv=float(a_conv),
        truncation_x=truncation_x, truncation_left=truncation_left,
    )
