"""Quadratic Lindbladians: structure matrices, gaps and the Sylvester solve."""
from ness_geometry.lindblad.shape import *  # noqa: F401, F403
from ness_geometry.lindblad.sylvester import *  # noqa: F401, F403
