"""
Wronsk Wronskian Module

Wronskian algebra and the quantization conditions built on it.

    W(f, g) = f g' - g f'

For a solution y = A·C + B·S of the eigenvalue equation:
    A = W(y, S),  B = W(C, y)                      (coefficient projection)

Asymptotically φ → A₁L_c + B₁L_d (x → -∞) and A₃R_c + B₃R_d (x → +∞).
A bound state needs B₁ = B₃ = 0, i.e. the determinant
    W(L_c, C)·W(R_c, S) - W(R_c, C)·W(L_c, S) = 0
which for even potentials with x₀ = 0 factorizes into
    W(R_c, C) = 0  (even states)     W(R_c, S) = 0  (odd states).

Tail bases, per side, with k = √(2(v_limit - ε)):
    Exponential:  R_c = e^{-kx}, R_d = e^{kx};  L_c = e^{kx}, L_d = e^{-kx}
    Threshold (k = 0):  conv = 1, div = x on both sides

The e^{-kx} damping stays in W(R_c, ·) so values keep the scale of the
published Wronskian plots; root locations are unaffected.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from ..config import THRESHOLD_K
from ..errors import (
    ContinuumError, DegenerateInputError, GridError, ParameterError,
    UnsupportedDiagnosticError,
)
from .integrator import SolutionPair
from .potential import Parity, Potential


def wronskian(f, f_prime, g, g_prime):
    """W(f, g) = f·g' - g·f'. Works elementwise on arrays."""
    return f * g_prime - g * f_prime


def project_coefficients(
    y: float, y_prime: float, pair_node: tuple[float, float, float, float],
) -> tuple[float, float]:
    """(A, B) with y = A·C + B·S at the node: A = W(y, S), B = W(C, y)."""
    c, c_prime, s, s_prime = pair_node
    return wronskian(y, y_prime, s, s_prime), wronskian(c, c_prime, y, y_prime)


# ---------------------------------------------------------------------------
# ASYMPTOTIC BASIS
# ---------------------------------------------------------------------------

class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class BasisMode(str, Enum):
    EXPONENTIAL = "exponential"
    THRESHOLD = "threshold"


class ConditionKind(str, Enum):
    GENERAL_DET = "general_det"
    EVEN_W = "even_w"
    ODD_W = "odd_w"


class TailValues(NamedTuple):
    conv: np.ndarray
    conv_prime: np.ndarray
    div: np.ndarray
    div_prime: np.ndarray


def tail_functions(k, x, side: Side) -> TailValues:
    """Convergent / divergent tail functions and derivatives at x (vectorized)."""
    k = np.asarray(k, dtype=float)
    x = np.asarray(x, dtype=float)
    sign = -1.0 if side is Side.RIGHT else 1.0
    threshold = k < THRESHOLD_K
    with np.errstate(over="ignore"):
        conv = np.where(threshold, 1.0, np.exp(sign * k * x))
        conv_prime = np.where(threshold, 0.0, sign * k * conv)
        div = np.where(threshold, x, np.exp(-sign * k * x))
        div_prime = np.where(threshold, 1.0, -sign * k * div)
    return TailValues(conv, conv_prime, div, div_prime)


@dataclass(frozen=True)
class AsymptoticBasis:
    """Tail functions on one side at one energy."""
    side: Side
    k: float
    mode: BasisMode
    energy: float
    v_limit: float

    def values(self, x) -> TailValues:
        return tail_functions(self.k, x, self.side)

    def conv(self, x):
        return self.values(x).conv

    def conv_prime(self, x):
        return self.values(x).conv_prime

    def div(self, x):
        return self.values(x).div

    def div_prime(self, x):
        return self.values(x).div_prime

    @property
    def wronskian_conv_div(self) -> float:
        """W(conv, div): 2k on the right, -2k on the left, 1 at threshold."""
        if self.mode is BasisMode.THRESHOLD:
            return 1.0
        return 2.0 * self.k if self.side is Side.RIGHT else -2.0 * self.k


def asymptotic_basis(eps: float, v_limit: float, side: Side) -> AsymptoticBasis:
    """
    Tail basis for energy ε against the asymptotic limit on `side`.

    Raises:
        ContinuumError: ε above v_limit.
    """
    if eps > v_limit:
        raise ContinuumError(
            f"Energy {eps:.6g} lies above the {side.value} limit {v_limit:.6g}; "
            "no convergent/divergent split"
        )
    k = math.sqrt(2.0 * (v_limit - eps))
    mode = BasisMode.THRESHOLD if k < THRESHOLD_K else BasisMode.EXPONENTIAL
    return AsymptoticBasis(side=side, k=k, mode=mode, energy=float(eps), v_limit=float(v_limit))


def basis_pair(p: Potential, eps: float) -> tuple[AsymptoticBasis, AsymptoticBasis]:
    return (asymptotic_basis(eps, p.v_left_limit, Side.LEFT),
            asymptotic_basis(eps, p.v_right_limit, Side.RIGHT))


# ---------------------------------------------------------------------------
# QUANTIZATION CONDITIONS
# ---------------------------------------------------------------------------

def _check_energy(pair: SolutionPair, basis: AsymptoticBasis) -> None:
    if abs(pair.energy - basis.energy) > 1e-12 * max(1.0, abs(pair.energy)):
        raise ParameterError(
            f"Solution pair at eps={pair.energy:.12g} does not match basis eps={basis.energy:.12g}"
        )


def _tail_wronskians(pair: SolutionPair, basis: AsymptoticBasis, x: float) -> tuple[float, float]:
    """(W(conv, C), W(conv, S)) read at the node nearest x."""
    _check_energy(pair, basis)
    i = pair.grid.index_of(x)
    x_node = pair.grid.nodes[i]
    t = basis.values(x_node)
    c, c_prime, s, s_prime = pair.node(i)
    return (float(wronskian(t.conv, t.conv_prime, c, c_prime)),
            float(wronskian(t.conv, t.conv_prime, s, s_prime)))


def parity_conditions(
    pair: SolutionPair, basis: AsymptoticBasis, x_eval: float,
) -> tuple[float, float]:
    """
    Even and odd conditions W(R_c, C), W(R_c, S) at x_eval.

    Exponential mode: [C' + kC]e^{-kx} and [S' + kS]e^{-kx};
    threshold mode: C'(x_eval) and S'(x_eval).
    """
    if basis.side is not Side.RIGHT:
        raise ParameterError("parity_conditions needs the right-side basis")
    return _tail_wronskians(pair, basis, x_eval)


def general_determinant(
    pair: SolutionPair,
    basis_left: AsymptoticBasis,
    basis_right: AsymptoticBasis,
    x_left: float,
    x_right: float,
) -> float:
    """W(L_c, C)·W(R_c, S) - W(R_c, C)·W(L_c, S) with x_left, x_right as read points."""
    lc_c, lc_s = _tail_wronskians(pair, basis_left, x_left)
    rc_c, rc_s = _tail_wronskians(pair, basis_right, x_right)
    return lc_c * rc_s - rc_c * lc_s


def _mixture_wronskian(pair, basis, x_eval, a2, b2, use_conv: bool) -> tuple[float, float]:
    if a2 == 0 and b2 == 0:
        raise DegenerateInputError("Mixture (0, 0) defines no wavefunction")
    if basis.mode is BasisMode.THRESHOLD:
        raise UnsupportedDiagnosticError(
            "Tail coefficients need k > 0; the threshold basis has no decay rate"
        )
    _check_energy(pair, basis)
    i = pair.grid.index_of(x_eval)
    t = basis.values(pair.grid.nodes[i])
    y = a2 * pair.c[i] + b2 * pair.s[i]
    yp = a2 * pair.c_prime[i] + b2 * pair.s_prime[i]
    if use_conv:
        return float(wronskian(t.conv, t.conv_prime, y, yp)), basis.wronskian_conv_div
    return float(wronskian(y, yp, t.div, t.div_prime)), basis.wronskian_conv_div


def divergent_coefficient(
    pair: SolutionPair, basis: AsymptoticBasis, x_eval: float, a2: float, b2: float,
) -> float:
    """
    Coefficient of the divergent tail in y = a2·C + b2·S.

    B = W(conv, y) / W(conv, div); on the right this is W(R_c, y)/(2k), and
    for the even ground state (a2, b2) = (1, 0) it is B₃.
    """
    w, norm = _mixture_wronskian(pair, basis, x_eval, a2, b2, use_conv=True)
    return w / norm


def convergent_coefficient(
    pair: SolutionPair, basis: AsymptoticBasis, x_eval: float, a2: float, b2: float,
) -> float:
    """Coefficient of the convergent tail: A = W(y, div) / W(conv, div)."""
    w, norm = _mixture_wronskian(pair, basis, x_eval, a2, b2, use_conv=False)
    return w / norm


class PlateauSpread(NamedTuple):
    even: float
    odd: float


def plateau_spread(
    pair: SolutionPair, basis: AsymptoticBasis, x_from: float, x_to: float,
) -> PlateauSpread:
    """
    Max relative deviation of W(conv, C) and W(conv, S) over the nodes in
    [x_from, x_to], measured against the value at x_to.
    """
    _check_energy(pair, basis)
    i0, i1 = pair.grid.index_of(x_from), pair.grid.index_of(x_to)
    if i1 <= i0:
        raise GridError(f"Plateau window [{x_from}, {x_to}] holds fewer than two nodes")
    sl = slice(i0, i1 + 1)
    t = basis.values(pair.grid.nodes[sl])
    spreads = []
    for y, yp in ((pair.c[sl], pair.c_prime[sl]), (pair.s[sl], pair.s_prime[sl])):
        w = wronskian(t.conv, t.conv_prime, y, yp)
        ref = abs(w[-1]) if w[-1] != 0 else 1.0
        spreads.append(float(np.max(np.abs(w - w[-1])) / ref))
    return PlateauSpread(*spreads)


@dataclass(frozen=True)
class QuantizationResult:
    energy: float
    value: float
    kind: ConditionKind
    eval_point_left: float
    eval_point_right: float


def quantization(
    pair: SolutionPair, p: Potential, x_left: float, x_right: float,
) -> list[QuantizationResult]:
    """
    Quantization values at the pair's energy.

    Even potentials integrated from x₀ = 0 give the two parity conditions;
    everything else gives the general determinant.
    """
    basis_left, basis_right = basis_pair(p, pair.energy)
    if p.parity is Parity.EVEN_SYMMETRIC and pair.grid.x0 == 0.0:
        even, odd = parity_conditions(pair, basis_right, x_right)
        return [
            QuantizationResult(pair.energy, even, ConditionKind.EVEN_W, -x_right, x_right),
            QuantizationResult(pair.energy, odd, ConditionKind.ODD_W, -x_right, x_right),
        ]
    det = general_determinant(pair, basis_left, basis_right, x_left, x_right)
    return [QuantizationResult(pair.energy, det, ConditionKind.GENERAL_DET, x_left, x_right)]
