"""
Wronsk Potential Module

Dimensionless potentials v(x) for the eigenvalue equation
    -½ φ''(x) + v(x) φ(x) = ε φ(x)

Provides:
  - built-in catalog: poschl_teller, gaussian, square_well
  - user potentials from the expression language (see expression.py)
  - nondimensionalization v(x) = (mL²/ħ²) V(Lx)
  - parity detection by sampling and asymptotic limits by probing
  - tail cuts: where v(x) has settled to its limit on each side
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional

import numpy as np

from ..config import (
    LIMIT_PROBE_X, PARITY_PROBE_HALF_WIDTH, PARITY_PROBES, PARITY_SEED,
    PARITY_TOL, TAIL_CLAMP, TAIL_LATTICE_STEP, TAIL_REFINE_WIDTH,
)
from ..errors import CatalogError, IllPosedPotentialError, ParameterError, TailError
from ..schemas import PhysicalScales
from .expression import parse_expression

logger = logging.getLogger("wronsk.potential")

Evaluator = Callable[[np.ndarray], np.ndarray]


class Parity(str, Enum):
    EVEN_SYMMETRIC = "even_symmetric"
    GENERAL = "general"


@dataclass(frozen=True)
class Potential:
    """Immutable dimensionless potential; evaluate works on numpy arrays."""
    evaluate: Evaluator
    parity: Parity
    v_left_limit: float
    v_right_limit: float
    label: str
    expression: Optional[str] = None

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return self.evaluate(x)

    @property
    def threshold(self) -> float:
        """Lowest asymptotic limit; bound states lie below it."""
        return min(self.v_left_limit, self.v_right_limit)

    def limit(self, side_sign: int) -> float:
        return self.v_right_limit if side_sign > 0 else self.v_left_limit


# ---------------------------------------------------------------------------
# BUILT-IN CATALOG
# ---------------------------------------------------------------------------

def _positive(params: dict, key: str, name: str) -> float:
    if key not in params:
        raise ParameterError(f"{name} needs parameter {key!r}")
    value = float(params[key])
    if not value > 0:
        raise ParameterError(f"{name}: {key} must be > 0, got {value}")
    return value


def _poschl_teller(params: dict) -> Potential:
    v0 = _positive(params, "v0", "poschl_teller")
    return Potential(
        evaluate=lambda x: -v0 / np.cosh(x) ** 2,
        parity=Parity.EVEN_SYMMETRIC,
        v_left_limit=0.0,
        v_right_limit=0.0,
        label=f"poschl_teller(v0={v0!r})",
        expression=f"-{v0!r}/cosh(x)^2",
    )


def _gaussian(params: dict) -> Potential:
    v0 = _positive(params, "v0", "gaussian")
    return Potential(
        evaluate=lambda x: -v0 * np.exp(-x ** 2),
        parity=Parity.EVEN_SYMMETRIC,
        v_left_limit=0.0,
        v_right_limit=0.0,
        label=f"gaussian(v0={v0!r})",
        expression=f"-{v0!r}*exp(-x^2)",
    )


def _square_well(params: dict) -> Potential:
    depth = _positive(params, "depth", "square_well")
    half_width = _positive(params, "half_width", "square_well")
    return Potential(
        evaluate=lambda x: np.where(np.abs(x) < half_width, -depth, 0.0),
        parity=Parity.EVEN_SYMMETRIC,
        v_left_limit=0.0,
        v_right_limit=0.0,
        label=f"square_well(depth={depth!r},half_width={half_width!r})",
    )


CATALOG: dict[str, Callable[[dict], Potential]] = {
    "poschl_teller": _poschl_teller,
    "gaussian": _gaussian,
    "square_well": _square_well,
}


def builtin(name: str, params: dict[str, float]) -> Potential:
    """
    Build a catalog potential.

    Args:
        name: poschl_teller | gaussian | square_well.
        params: {"v0": ...} for the two smooth wells,
                {"depth": ..., "half_width": ...} for the square well.

    Returns:
        Even potential vanishing at ±∞.
    """
    try:
        factory = CATALOG[name]
    except KeyError:
        raise CatalogError(
            f"Unknown potential {name!r}. Available: {', '.join(sorted(CATALOG))}"
        ) from None
    return factory(params)


Family = Callable[[float], Potential]


def builtin_family(name: str, params: dict[str, float], coupling: str = "v0") -> Family:
    """v ↦ builtin(name, params with params[coupling] = v)."""
    if name not in CATALOG:
        raise CatalogError(
            f"Unknown potential {name!r}. Available: {', '.join(sorted(CATALOG))}"
        )
    fixed = {k: v for k, v in params.items() if k != coupling}
    return lambda value: builtin(name, {**fixed, coupling: value})


def scaled_family(p: Potential) -> Family:
    """v ↦ v · p(x); the coupling family of an expression potential."""
    return lambda value: scaled(p, value)


# ---------------------------------------------------------------------------
# PROBING: PARITY AND LIMITS
# ---------------------------------------------------------------------------

def _probe(evaluate: Evaluator, x: np.ndarray, label: str) -> np.ndarray:
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        values = np.asarray(evaluate(x), dtype=float) * np.ones_like(x)
    bad = ~np.isfinite(values)
    if bad.any():
        raise IllPosedPotentialError(
            f"{label} is not finite at x = {x[bad][0]:.6g}"
        )
    return values


def detect_parity(evaluate: Evaluator, label: str = "potential") -> Parity:
    """Even iff |v(x) - v(-x)| <= 1e-10 at the pseudo-random probe points."""
    rng = np.random.default_rng(PARITY_SEED)
    x = rng.uniform(-PARITY_PROBE_HALF_WIDTH, PARITY_PROBE_HALF_WIDTH, PARITY_PROBES)
    gap = np.abs(_probe(evaluate, x, label) - _probe(evaluate, -x, label))
    return Parity.EVEN_SYMMETRIC if np.all(gap <= PARITY_TOL) else Parity.GENERAL


def probe_limits(evaluate: Evaluator, label: str = "potential") -> tuple[float, float]:
    values = _probe(evaluate, np.array([-LIMIT_PROBE_X, LIMIT_PROBE_X]), label)
    return float(values[0]), float(values[1])


def _from_evaluator(evaluate: Evaluator, label: str, expression: Optional[str] = None) -> Potential:
    parity = detect_parity(evaluate, label)
    left, right = probe_limits(evaluate, label)
    logger.debug("%s: parity=%s limits=(%g, %g)", label, parity.value, left, right)
    return Potential(
        evaluate=evaluate,
        parity=parity,
        v_left_limit=left,
        v_right_limit=right,
        label=label,
        expression=expression,
    )


def parse_potential(expr: str) -> Potential:
    """Potential from an expression such as "-5*exp(-x^2)"."""
    tree = parse_expression(expr)
    return _from_evaluator(tree.evaluate, label=expr.strip(), expression=expr.strip())


def nondimensionalize(
    scales: PhysicalScales,
    V: Callable[[np.ndarray], np.ndarray],
    label: str = "nondimensionalized",
) -> Potential:
    """
    v(x) = V(L·x) / (ħ²/(mL²)).

    Energies found for the returned potential convert back with
    scales.to_physical_energy(ε).
    """
    length, energy = scales.length_scale, scales.energy_scale
    return _from_evaluator(lambda x: np.asarray(V(length * x), dtype=float) / energy, label)


def scaled(p: Potential, factor: float) -> Potential:
    """factor · v(x); used to sweep the depth of an expression potential."""
    return Potential(
        evaluate=lambda x: factor * p.evaluate(x),
        parity=p.parity,
        v_left_limit=factor * p.v_left_limit,
        v_right_limit=factor * p.v_right_limit,
        label=f"{factor!r}*({p.label})",
        expression=None if p.expression is None else f"{factor!r}*({p.expression})",
    )


# ---------------------------------------------------------------------------
# TAIL CUT
# ---------------------------------------------------------------------------

class TailCut(NamedTuple):
    """Distances from the origin beyond which v has settled, per side."""
    left: float
    right: float


def _settle_distance(p: Potential, sign: int, tol: float) -> float:
    lo_clamp, hi_clamp = TAIL_CLAMP
    limit = p.limit(sign)
    n = int(round(hi_clamp / TAIL_LATTICE_STEP))
    distances = TAIL_LATTICE_STEP * np.arange(n + 1)
    deviation = np.abs(p(sign * distances) - limit)
    unsettled = np.flatnonzero(~(deviation <= tol))
    if unsettled.size == 0:
        return lo_clamp
    last = unsettled[-1]
    if last == n:
        raise TailError(
            f"{p.label} differs from its limit by more than {tol:g} at |x| = {hi_clamp:g}"
        )

    # bisection between the last unsettled and the first settled lattice point
    lo, hi = distances[last], distances[last + 1]
    while hi - lo > TAIL_REFINE_WIDTH:
        mid = 0.5 * (lo + hi)
        if abs(float(p(sign * mid)) - limit) <= tol:
            hi = mid
        else:
            lo = mid
    return float(min(max(hi, lo_clamp), hi_clamp))


def tail_cut(p: Potential, tol: float) -> TailCut:
    """
    Smallest |x| on each side beyond which |v(x) - v_limit| <= tol.

    Coarse lattice of step 0.5 outward from the origin, then bisection to
    1e-3; results clamped to [1, 50].
    """
    if not tol > 0:
        raise ParameterError(f"tail_cut tolerance must be > 0, got {tol}")
    return TailCut(left=_settle_distance(p, -1, tol), right=_settle_distance(p, +1, tol))


def sample_minimum(p: Potential, x_left: float, x_right: float, h: float) -> float:
    """Lowest value of v on the lattice of step h spanning [x_left, x_right]."""
    n = max(1, int(math.ceil((x_right - x_left) / h)))
    return float(np.min(p(np.linspace(x_left, x_right, n + 1))))
