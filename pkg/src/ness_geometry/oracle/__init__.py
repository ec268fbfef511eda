"""Brute-force dense ground truth for few-mode systems."""
from ness_geometry.oracle.dense import *  # noqa: F401, F403
