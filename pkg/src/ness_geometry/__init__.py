"""Steady states, fidelity metric and gaps of quadratic fermionic Lindbladians."""

from importlib_metadata import version

__version__ = version(__package__)
