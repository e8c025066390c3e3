"""
floquet-kapitza - Dynamical Stabilization by Oscillating Potentials
====================================================================

A library and batch CLI that simulates and verifies Kapitza-type
stabilization for real and imaginary oscillating potentials:
- Classical pendulum with real or imaginary drive amplitude
- Floquet quasi-energy spectra of the driven non-Hermitian Schrodinger operator
- Effective-potential and delta-well oracles
- Square-wave monodromy and optical resonator round-trip operators
"""

__version__ = "1.0.0"
