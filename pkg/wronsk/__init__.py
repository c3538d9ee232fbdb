"""
Wronsk: bound states of one-dimensional potentials by the Wronskian method.

Integrates the canonical solution pair C(x), S(x) of the dimensionless
Schrödinger equation outward from a matching point, forms Wronskians with the
convergent/divergent asymptotic tails and finds the energies (or couplings)
where the divergent coefficient vanishes.
"""

__version__ = "1.0.0"
