"""Bures metric of Gaussian steady states, their fidelity and the gap bounds."""
from ness_geometry.geometry.bures import *  # noqa: F401, F403
