"""Tests for scans, root refinement, bound states, critical couplings and wavefunctions."""

import logging
import math

import numpy as np
import pytest

from wronsk.engines.oracle import exact_poschl_teller, finite_difference_spectrum
from wronsk.engines.potential import builtin, builtin_family, parse_potential, scaled_family
from wronsk.engines.solver import (
    condition_function, critical_couplings, energy_window, find_bound_states,
    refine_root, scan_coupling, scan_energy, scan_position, sign_change_brackets,
    wavefunction,
)
from wronsk.errors import (
    BracketError, ContinuumError, ConvergenceError, DegenerateInputError, ParameterError,
)
from wronsk.schemas import SolverOptions, StateParity


def energies(states):
    return [s.energy for s in states]


def brackets_containing(table, column, value):
    return [
        (lo, hi) for lo, hi in sign_change_brackets(table.abscissa, table.columns[column])
        if lo <= value <= hi
    ]


class TestSignChangeBrackets:
    def test_simple(self):
        x = np.array([0.0, 1.0, 2.0, 3.0])
        assert sign_change_brackets(x, np.array([1.0, -1.0, -2.0, 3.0])) == [(0.0, 1.0), (2.0, 3.0)]

    def test_zero_run_between_opposite_signs(self):
        x = np.arange(5.0)
        assert sign_change_brackets(x, np.array([1.0, 0.0, 0.0, 0.0, -1.0])) == [(2.0, 2.0)]

    def test_touching_zero_is_not_a_root(self):
        x = np.arange(3.0)
        assert sign_change_brackets(x, np.array([1.0, 0.0, 1.0])) == []

    def test_identically_zero(self):
        assert sign_change_brackets(np.arange(4.0), np.zeros(4)) == []


class TestRefineRoot:
    def test_linear(self):
        root = refine_root(lambda e: e + 2.0, (-3.0, -1.0), tol=1e-10)
        assert abs(root + 2.0) < 1e-10

    def test_reversed_bracket(self):
        root = refine_root(lambda e: e + 2.0, (-1.0, -3.0), tol=1e-10)
        assert abs(root + 2.0) < 1e-10

    def test_endpoint_zero(self):
        assert refine_root(lambda e: e, (0.0, 1.0)) == 0.0

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            refine_root(lambda e: e * e + 1.0, (-1.0, 1.0))

    def test_budget_exhausted_carries_bracket(self):
        with pytest.raises(ConvergenceError) as info:
            refine_root(lambda e: e + 2.1, (-3.0, -1.0), tol=1e-12, max_iter=5)
        lo, hi = info.value.bracket
        assert lo <= -2.1 <= hi
        assert abs((hi - lo) - 2.0 / 2 ** 5) < 1e-12

    def test_bad_tolerance(self):
        with pytest.raises(ParameterError):
            refine_root(lambda e: e, (-1.0, 1.0), tol=0.0)

    def test_brent(self):
        root = refine_root(lambda e: e ** 3 - 2.0, (1.0, 2.0), tol=1e-12, method="brent")
        assert abs(root - 2.0 ** (1.0 / 3.0)) < 1e-10

    def test_deterministic(self):
        f = lambda e: math.cos(e) - e
        assert refine_root(f, (0.0, 1.0)) == refine_root(f, (0.0, 1.0))

    def test_poschl_teller_even_condition(self, pt6, opts_x5):
        f = condition_function(pt6, "even", opts_x5)
        assert abs(refine_root(f, (-4.6, -4.4)) + 4.5) < 1e-6

    def test_gaussian_odd_condition_matches_finite_differences(self, gaussian5, opts_x5):
        f = condition_function(gaussian5, "odd", opts_x5)
        root = refine_root(f, (-1.5, -0.5))
        reference = finite_difference_spectrum(gaussian5, -10.0, 10.0, 4000)
        assert abs(root - reference[1]) < 1e-4

    def test_condition_unavailable(self, pt6):
        with pytest.raises(ParameterError):
            condition_function(pt6, "det")


class TestScanEnergy:
    def test_poschl_teller_brackets(self, pt6, opts_x5):
        table = scan_energy(pt6, -5.2, -0.05, 200, opts_x5)
        assert table.kind == "parity"
        assert len(table) == 200
        assert np.all(np.diff(table.abscissa) > 0)
        even = sign_change_brackets(table.abscissa, table.columns["even"])
        odd = sign_change_brackets(table.abscissa, table.columns["odd"])
        assert len(even) == 2 and len(odd) == 1
        assert brackets_containing(table, "even", -4.5)
        assert brackets_containing(table, "odd", -2.0)
        assert brackets_containing(table, "even", -0.5)

    def test_gaussian_ground_bracket(self, gaussian5):
        table = scan_energy(gaussian5, -5.0, -0.05, 200)
        lo, hi = sign_change_brackets(table.abscissa, table.columns["even"])[0]
        assert abs(0.5 * (lo + hi) + 3.61) < 0.03

    def test_zero_potential_has_no_sign_change(self, zero_potential):
        table = scan_energy(zero_potential, -1.0, -0.01, 50)
        for values in table.columns.values():
            assert sign_change_brackets(table.abscissa, values) == []

    def test_general_potential_scans_determinant(self):
        p = parse_potential("-5*exp(-(x-1.7)^2)")
        table = scan_energy(p, -4.0, -3.0, 20)
        assert table.kind == "general"
        assert list(table.columns) == ["det"]
        mids = [0.5 * (lo + hi) for lo, hi in sign_change_brackets(table.abscissa, table.columns["det"])]
        assert any(abs(m + 3.6077) < 0.06 for m in mids)

    def test_overflowed_rows_are_skipped(self, pt6, caplog):
        opts = SolverOptions(x_eval=10.0)
        with caplog.at_level(logging.WARNING, logger="wronsk.solver"):
            table = scan_energy(pt6, -5000.0, -1.0, 5, opts)
        assert len(table) == 2
        assert table.skipped.size == 3
        assert np.all(np.isfinite(table.columns["even"]))
        assert "skipped" in caplog.text

    def test_above_threshold(self, pt6):
        with pytest.raises(ContinuumError):
            scan_energy(pt6, -1.0, 0.5, 10)

    def test_bad_lattice(self, pt6):
        with pytest.raises(ParameterError):
            scan_energy(pt6, -1.0, -0.5, 1)
        with pytest.raises(ParameterError):
            scan_energy(pt6, -0.5, -1.0, 10)

    def test_to_frame(self, pt6, opts_x5):
        df = scan_energy(pt6, -3.0, -1.0, 5, opts_x5).to_frame()
        assert list(df.columns) == ["energy", "even", "odd"]
        assert len(df) == 5


class TestScanCoupling:
    def test_gaussian_crossings(self):
        family = builtin_family("gaussian", {"v0": 1.0})
        table = scan_coupling(family, 0.2, 10.0, 200)
        assert table.abscissa_name == "v0"
        assert table.kind == "parity"
        assert brackets_containing(table, "odd", 1.342)
        assert brackets_containing(table, "even", 4.325)
        assert brackets_containing(table, "odd", 8.898)


class TestScanPosition:
    def test_plateau_deep_in_the_tail(self):
        p = parse_potential("-2.5/cosh(x)^2")
        table = scan_position(p, -1.0, 12.0, 13.0)
        assert table.kind == "position"
        for values in table.columns.values():
            spread = (values.max() - values.min()) / np.max(np.abs(values))
            assert spread < 1e-6

    def test_mirror_for_even_potential(self, gaussian5):
        """For even v, W(conv, C) is odd in x and W(conv, S) even."""
        table = scan_position(gaussian5, -1.0, -3.0, 3.0)
        w_c, w_s = table.columns["w_conv_c"], table.columns["w_conv_s"]
        half = len(table) // 2
        assert np.allclose(w_c[:half], -w_c[::-1][:half], rtol=1e-9, atol=1e-14)
        assert np.allclose(w_s[:half], w_s[::-1][:half], rtol=1e-9, atol=1e-14)

    def test_bad_range(self, pt6):
        with pytest.raises(ParameterError):
            scan_position(pt6, -1.0, 5.0, 4.0)


class TestEnergyWindow:
    def test_defaults(self, pt6):
        floor, ceiling = energy_window(pt6, SolverOptions())
        assert abs(floor + 6.0) < 1e-3
        assert ceiling == -1e-6

    def test_overrides(self, pt6):
        assert energy_window(pt6, SolverOptions(eps_floor=-3.0, eps_ceiling=-1.0)) == (-3.0, -1.0)

    def test_ceiling_clamped_to_threshold(self, pt6):
        assert energy_window(pt6, SolverOptions(eps_ceiling=1.0))[1] == 0.0


class TestFindBoundStates:
    def test_poschl_teller(self, pt6, opts_x5):
        states = find_bound_states(pt6, opts_x5)
        assert len(states) == 3
        for state, exact in zip(states, [-4.5, -2.0, -0.5]):
            assert abs(state.energy - exact) < 1e-6
        assert [s.parity for s in states] == [StateParity.EVEN, StateParity.ODD, StateParity.EVEN]
        assert [s.index for s in states] == [0, 1, 2]

    def test_residuals(self, pt6, opts_x5):
        for state in find_bound_states(pt6, opts_x5):
            assert state.k * state.x_eval >= 3.0
            assert not state.low_confidence
            assert abs(state.wronskian_residual) <= 1e-5
            assert abs(state.residual_divergent) <= 1e-4
            assert state.bracket_width <= 1e-9

    def test_single_state_below_first_critical_depth(self):
        states = find_bound_states(builtin("poschl_teller", {"v0": 0.5}))
        assert len(states) == 1
        assert abs(states[0].energy - exact_poschl_teller(0.5)[0]) < 1e-6

    def test_gaussian_ground_state(self, gaussian5):
        states = find_bound_states(gaussian5)
        assert len(states) == 3
        assert abs(states[0].energy + 3.6077) < 1e-3
        assert [s.parity for s in states] == [StateParity.EVEN, StateParity.ODD, StateParity.EVEN]

    def test_gaussian_matches_finite_differences(self, gaussian5):
        found = energies(find_bound_states(gaussian5))
        deep = finite_difference_spectrum(gaussian5, -10.0, 10.0, 4000)
        assert abs(found[0] - deep[0]) < 1e-4
        assert abs(found[1] - deep[1]) < 1e-4
        wide = finite_difference_spectrum(gaussian5, -30.0, 30.0, 12000)
        assert len(wide) == len(found)
        for e, ref in zip(found, wide):
            assert abs(e - ref) < 1e-4

    def test_window_floor(self, pt6, opts_x5):
        opts = SolverOptions(x_eval=5.0, eps_floor=-2.5)
        states = find_bound_states(pt6, opts)
        assert len(states) == 2
        assert abs(states[0].energy + 2.0) < 1e-6
        assert states[0].index == 0

    def test_zero_potential_binds_nothing(self, zero_potential):
        assert find_bound_states(zero_potential) == []

    def test_brent_agrees_with_bisection(self, pt6):
        bisect = energies(find_bound_states(pt6, SolverOptions(x_eval=5.0)))
        brent = energies(find_bound_states(pt6, SolverOptions(x_eval=5.0, method="brent")))
        assert np.allclose(bisect, brent, rtol=0, atol=1e-8)

    def test_deterministic(self, pt6, opts_x5):
        first = [s.model_dump() for s in find_bound_states(pt6, opts_x5)]
        second = [s.model_dump() for s in find_bound_states(pt6, opts_x5)]
        assert first == second

    def test_jobs_do_not_change_results(self, gaussian5):
        serial = find_bound_states(gaussian5, SolverOptions(x_eval=5.0, jobs=1))
        threaded = find_bound_states(gaussian5, SolverOptions(x_eval=5.0, jobs=2))
        assert energies(serial) == energies(threaded)


    def test_long_range_well_reads_at_cap(self, caplog):
        """-2/(1+x²) has not settled to 1e-10 by |x| = 50; auto x_eval falls back to 50."""
        p = parse_potential("-2/(1+x^2)")
        with caplog.at_level(logging.WARNING, logger="wronsk.solver"):
            states = find_bound_states(p)
        assert states
        ground = states[0]
        assert -2.0 < ground.energy < 0.0
        assert ground.parity == StateParity.EVEN
        assert abs(ground.x_eval - 50.0) < 1e-9
        assert all(s.low_confidence for s in states)
        assert "reading the tails at x_eval = 50" in caplog.text


class TestPoschlTellerSweep:
    @pytest.mark.parametrize("v0", np.linspace(0.3, 12.0, 20))
    def test_matches_closed_form(self, v0):
        exact = exact_poschl_teller(float(v0))
        found = find_bound_states(builtin("poschl_teller", {"v0": float(v0)}))
        assert len(found) == len(exact)
        for state, e in zip(found, exact):
            assert abs(state.energy - e) < 1e-6

    def test_shallow_state_flagged(self):
        """v0 = 10.15 binds a fifth level near -5.8e-4 with k·x_eval < 3."""
        states = find_bound_states(builtin("poschl_teller", {"v0": 10.15}))
        assert len(states) == 5
        assert abs(states[-1].energy - exact_poschl_teller(10.15)[-1]) < 1e-6
        assert states[-1].low_confidence
        assert not states[0].low_confidence


class TestGeneralPath:
    @pytest.mark.parametrize("shift", [0.5, 1.7])
    def test_translation_invariance(self, gaussian5, shift):
        reference = energies(find_bound_states(gaussian5))
        shifted = find_bound_states(parse_potential(f"-5*exp(-(x-{shift})^2)"))
        assert all(s.parity is StateParity.NONE for s in shifted)
        assert len(shifted) == len(reference)
        for s, e in zip(shifted, reference):
            assert abs(s.energy - e) < 1e-6

    def test_mixture_is_unit_vector(self):
        states = find_bound_states(parse_potential("-5*exp(-(x-1.7)^2)"))
        for s in states:
            a, b = s.mixture
            assert abs(math.hypot(a, b) - 1.0) < 1e-12
            assert a >= 0.0


class TestMonotonicity:
    def test_deeper_well_lowers_levels(self):
        ladder = [find_bound_states(builtin("gaussian", {"v0": v0})) for v0 in (3.0, 5.0, 7.0)]
        for shallow, deep in zip(ladder, ladder[1:]):
            assert len(deep) >= len(shallow)
            for a, b in zip(shallow, deep):
                assert b.energy < a.energy


class TestCriticalCouplings:
    def test_poschl_teller(self):
        family = builtin_family("poschl_teller", {"v0": 1.0})
        found = critical_couplings(family, 0.2, 10.0)
        assert len(found) >= 3
        for c, exact in zip(found, [1.0, 3.0, 6.0]):
            assert abs(c.coupling - exact) < 1e-4
        assert [c.parity for c in found[:3]] == [StateParity.ODD, StateParity.EVEN, StateParity.ODD]
        # v0 = 10 is itself critical and may show up at the range edge
        for c in found[3:]:
            assert abs(c.coupling - 10.0) < 1e-3

    def test_gaussian(self):
        family = builtin_family("gaussian", {"v0": 1.0})
        found = critical_couplings(family, 0.2, 10.0)
        assert len(found) == 3
        for c, expected in zip(found, [1.342, 4.325, 8.898]):
            assert abs(c.coupling - expected) < 5e-3
        assert [c.parity for c in found] == [StateParity.ODD, StateParity.EVEN, StateParity.ODD]

    def test_zero_family(self, zero_potential):
        assert critical_couplings(scaled_family(zero_potential), 0.2, 10.0) == []

    def test_bad_range(self):
        with pytest.raises(ParameterError):
            critical_couplings(builtin_family("gaussian", {}), 5.0, 1.0)


class TestWavefunction:
    def test_gaussian_decay_rate(self, gaussian5, opts_x5):
        ground = find_bound_states(gaussian5, opts_x5)[0]
        wf = wavefunction(gaussian5, ground.energy, parity=StateParity.EVEN, opts=opts_x5)
        mask = (wf.x >= 2.0) & (wf.x <= 3.0)
        slope = np.polyfit(wf.x[mask], np.log(np.abs(wf.phi[mask])), 1)[0]
        assert abs(-slope - 2.686) / 2.686 < 0.02

    def test_gaussian_truncation_and_divergent_tail(self, gaussian5, opts_x5):
        wf = wavefunction(gaussian5, -3.6077, parity=StateParity.EVEN, opts=opts_x5)
        assert abs(wf.k - 2.686) < 1e-3
        assert 5e-7 <= abs(wf.b_div) <= 5e-6
        assert 1.5 < wf.truncation_x < 5.0
        i = int(np.argmin(np.abs(wf.x - 5.0)))
        ratio = wf.phi[i] * math.exp(-wf.k * wf.x[i]) / wf.b_div
        assert 0.5 <= ratio <= 2.0
        far = wf.x >= 7.0
        assert np.allclose(wf.divergent_tail[far], wf.phi[far], rtol=1e-5, atol=0)

    def test_poschl_teller_ground_state_shape(self, pt6, opts_x5):
        wf = wavefunction(pt6, -4.5, parity=StateParity.EVEN, opts=opts_x5)
        mask = wf.x <= 3.0
        r = np.corrcoef(wf.phi[mask], np.cosh(wf.x[mask]) ** -3)[0, 1]
        assert r > 1.0 - 1e-8

    def test_poschl_teller_monotone_before_truncation(self, pt6, opts_x5):
        wf = wavefunction(pt6, -4.5, opts=opts_x5)
        assert wf.mixture == (1.0, 0.0)
        mask = wf.x <= wf.truncation_x
        assert np.all(np.diff(wf.phi[mask]) <= 0.0)

    def test_default_parity_picks_vanishing_condition(self, pt6, opts_x5):
        assert wavefunction(pt6, -2.0, opts=opts_x5).mixture == (0.0, 1.0)

    def test_extent_and_frame(self, pt6, opts_x5):
        wf = wavefunction(pt6, -4.5, opts=opts_x5)
        assert abs(wf.x[-1] - 10.0) < 1e-9
        assert abs(wf.x[0]) < 1e-12
        assert list(wf.to_frame().columns) == ["x", "phi", "phi_prime", "divergent_tail"]

    def test_general_potential(self):
        p = parse_potential("-5*exp(-(x-1.7)^2)")
        ground = find_bound_states(p)[0]
        wf = wavefunction(p, ground.energy)
        assert wf.truncation_left is not None
        assert wf.truncation_left < 1.7 < wf.truncation_x
        # beyond the truncation points the divergent tails take over
        inside = (wf.x >= wf.truncation_left) & (wf.x <= wf.truncation_x)
        x, phi = wf.x[inside], wf.phi[inside]
        peak = x[int(np.argmax(np.abs(phi)))]
        assert abs(peak - 1.7) < 0.05

    def test_threshold_energy(self, gaussian5, caplog):
        with caplog.at_level(logging.WARNING, logger="wronsk.solver"):
            wf = wavefunction(gaussian5, 0.0, parity=StateParity.EVEN)
        assert math.isnan(wf.b_div) and math.isnan(wf.a_conv)
        assert "threshold" in caplog.text

    def test_degenerate_mixture(self, gaussian5):
        with pytest.raises(DegenerateInputError):
            wavefunction(gaussian5, -3.6, mixture=(0.0, 0.0))

    def test_above_threshold(self, gaussian5):
        with pytest.raises(ContinuumError):
            wavefunction(gaussian5, 0.3)
