"""Tests for potentials, the expression language and tail cuts."""

import math

import numpy as np
import pytest

from wronsk.engines.expression import format_expression, parse_expression, tokenize
from wronsk.engines.potential import (
    Parity, builtin, builtin_family, detect_parity, nondimensionalize,
    parse_potential, sample_minimum, scaled, scaled_family, tail_cut,
)
from wronsk.errors import (
    CatalogError, ExpressionSyntaxError, IllPosedPotentialError, ParameterError, TailError,
)
from wronsk.schemas import PhysicalScales

X = np.linspace(-6.0, 6.0, 241)


class TestCatalog:
    def test_poschl_teller_values(self, pt6):
        assert abs(float(pt6(0.0)) + 6.0) < 1e-12
        assert abs(float(pt6(1.0)) + 6.0 / math.cosh(1.0) ** 2) < 1e-12

    def test_gaussian_values(self, gaussian5):
        assert abs(float(gaussian5(0.0)) + 5.0) < 1e-12
        assert abs(float(gaussian5(2.0)) + 5.0 * math.exp(-4.0)) < 1e-12

    def test_square_well(self):
        p = builtin("square_well", {"depth": 3.0, "half_width": 1.0})
        assert float(p(0.5)) == -3.0
        assert float(p(2.0)) == 0.0
        assert p.parity is Parity.EVEN_SYMMETRIC

    def test_builtins_are_even_and_vanish(self, pt6, gaussian5):
        for p in (pt6, gaussian5):
            assert p.parity is Parity.EVEN_SYMMETRIC
            assert p.v_left_limit == 0.0 and p.v_right_limit == 0.0
            assert p.threshold == 0.0

    def test_unknown_name(self):
        with pytest.raises(CatalogError):
            builtin("morse", {"v0": 1.0})

    def test_missing_parameter(self):
        with pytest.raises(ParameterError):
            builtin("gaussian", {})

    def test_non_positive_parameter(self):
        with pytest.raises(ParameterError):
            builtin("poschl_teller", {"v0": 0.0})

    def test_expression_reproduces_builtin(self, pt6, gaussian5):
        """The printable expression of a built-in parses back to the same function."""
        for p in (pt6, gaussian5):
            again = parse_potential(p.expression)
            assert np.allclose(again(X), p(X), rtol=1e-14, atol=1e-300)

    def test_builtin_family(self):
        family = builtin_family("gaussian", {"v0": 1.0})
        assert abs(float(family(2.5)(0.0)) + 2.5) < 1e-12

    def test_builtin_family_unknown(self):
        with pytest.raises(CatalogError):
            builtin_family("morse", {})


class TestExpression:
    def evaluate(self, text, x):
        return float(parse_expression(text).evaluate(np.array(x, dtype=float)))

    def test_unary_minus_binds_looser_than_power(self):
        assert self.evaluate("-x^2", 2.0) == -4.0

    def test_power_is_right_associative(self):
        assert self.evaluate("2^3^2", 0.0) == 512.0

    def test_negative_exponent(self):
        assert self.evaluate("x^-2", 2.0) == 0.25

    def test_precedence(self):
        assert self.evaluate("1 + 2*3 - 4/2", 0.0) == 5.0

    def test_exponent_notation(self):
        assert abs(self.evaluate("1e-05*x", 3.0) - 3e-5) < 1e-20

    def test_functions(self):
        assert self.evaluate("sech(x)", 0.0) == 1.0
        assert abs(self.evaluate("tanh(x) + cosh(x) - sinh(x)", 0.7)
                   - (math.tanh(0.7) + math.exp(-0.7))) < 1e-14
        assert self.evaluate("abs(x)", -3.0) == 3.0

    def test_format_round_trip(self):
        tree = parse_expression("-5*exp(-(x-1.7)^2) + 2/cosh(x)^2")
        again = parse_expression(format_expression(tree))
        assert np.array_equal(again.evaluate(X), tree.evaluate(X))

    def test_unbalanced_parenthesis(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("-5*exp(-x^2")
        assert info.value.position == len("-5*exp(-x^2")

    def test_unknown_name(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("2*foo(x)")
        assert info.value.position == 2

    def test_bad_character(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse_expression("3 $ x")
        assert info.value.position == 2

    def test_empty(self):
        with pytest.raises(ExpressionSyntaxError):
            parse_expression("   ")

    def test_tokenize_positions(self):
        tokens = tokenize("x + 12.5")
        assert [(t.kind, t.position) for t in tokens] == [
            ("name", 0), ("op", 2), ("number", 4), ("end", 8),
        ]


class TestProbing:
    def test_even_expression(self):
        assert parse_potential("-5*exp(-x^2)").parity is Parity.EVEN_SYMMETRIC

    def test_shifted_is_general(self):
        assert parse_potential("-5*exp(-(x-1.7)^2)").parity is Parity.GENERAL

    def test_limits(self):
        p = parse_potential("tanh(x)")
        assert abs(p.v_left_limit + 1.0) < 1e-12
        assert abs(p.v_right_limit - 1.0) < 1e-12
        assert p.parity is Parity.GENERAL
        assert p.threshold == p.v_left_limit

    def test_ill_posed(self):
        with pytest.raises(IllPosedPotentialError):
            parse_potential("exp(x^2)")

    def test_detect_parity_is_deterministic(self):
        f = parse_expression("x^2 + 1e-9*x").evaluate
        assert detect_parity(f) is detect_parity(f)


class TestTailCut:
    def test_zero_potential(self, zero_potential):
        assert tail_cut(zero_potential, 1e-10) == (1.0, 1.0)

    def test_gaussian(self, gaussian5):
        cut = tail_cut(gaussian5, 1e-10)
        expected = math.sqrt(math.log(5.0 / 1e-10))
        assert abs(cut.right - expected) < 2e-3
        assert abs(cut.left - expected) < 2e-3

    def test_poschl_teller(self, pt6):
        cut = tail_cut(pt6, 1e-10)
        # 6 sech²x ≈ 24 e^{-2x}
        expected = 0.5 * math.log(24.0 / 1e-10)
        assert abs(cut.right - expected) < 2e-3

    def test_asymmetric(self):
        cut = tail_cut(parse_potential("-5*exp(-(x-1.7)^2)"), 1e-10)
        assert cut.right > cut.left
        assert abs((cut.right - cut.left) - 3.4) < 4e-3

    def test_never_settles(self):
        with pytest.raises(TailError):
            tail_cut(parse_potential("-1/(1+abs(x))"), 1e-10)

    def test_bad_tolerance(self, pt6):
        with pytest.raises(ParameterError):
            tail_cut(pt6, 0.0)

    def test_sample_minimum(self, gaussian5):
        assert abs(sample_minimum(gaussian5, -5.0, 5.0, 0.01) + 5.0) < 1e-12


class TestScaling:
    def test_nondimensionalize_gaussian(self, gaussian5):
        scales = PhysicalScales(mass=2.0, hbar=1.0, length_scale=0.5)
        assert scales.energy_scale == 2.0
        p = nondimensionalize(scales, lambda X_: -10.0 * np.exp(-(X_ / 0.5) ** 2))
        assert np.allclose(p(X), gaussian5(X), rtol=1e-14, atol=1e-300)
        assert p.parity is Parity.EVEN_SYMMETRIC

    def test_energy_conversion(self):
        scales = PhysicalScales(mass=2.0, hbar=1.0, length_scale=0.5)
        assert scales.to_physical_energy(-3.0) == -6.0
        assert scales.to_dimensionless_energy(-6.0) == -3.0

    def test_scaled(self, gaussian5):
        p = scaled(builtin("gaussian", {"v0": 1.0}), 5.0)
        assert np.allclose(p(X), gaussian5(X), rtol=1e-14, atol=1e-300)
        assert p.parity is Parity.EVEN_SYMMETRIC

    def test_scaled_family_of_expression(self):
        family = scaled_family(parse_potential("-exp(-x^2)"))
        assert abs(float(family(4.325)(0.0)) + 4.325) < 1e-12
