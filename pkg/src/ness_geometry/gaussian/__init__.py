"""Gaussian fermionic states: correlation matrices and spin observables."""
from ness_geometry.gaussian.correlators import *  # noqa: F401, F403
from ness_geometry.gaussian.states import *  # noqa: F401, F403
