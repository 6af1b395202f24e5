"""Numerical modules: disk geometry, rational pairs, H(b), interpolation, random sequences."""
