"""Finite-size scaling fits, phase classification and parameter sweeps."""
from ness_geometry.scaling.fits import *  # noqa: F401, F403
from ness_geometry.scaling.sweeps import *  # noqa: F401, F403
