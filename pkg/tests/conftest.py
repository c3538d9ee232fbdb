"""Shared test fixtures for Wronsk."""

import sys
import os
import pytest

# Add repository root to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from wronsk.engines.potential import builtin, parse_potential
from wronsk.schemas import SolverOptions


@pytest.fixture
def pt6():
    """Pöschl–Teller well v0 = 6 (λ = 4): energies -4.5, -2.0, -0.5."""
    return builtin("poschl_teller", {"v0": 6.0})


@pytest.fixture
def gaussian5():
    """Gaussian well v0 = 5: three bound states, ground near -3.6077."""
    return builtin("gaussian", {"v0": 5.0})


@pytest.fixture
def zero_potential():
    return parse_potential("0*x")


@pytest.fixture
def opts_x5():
    """Fixed read point x_eval = 5, the protocol of the reference runs."""
    return SolverOptions(x_eval=5.0)
