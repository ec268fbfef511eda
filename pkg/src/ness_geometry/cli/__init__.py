"""Command-line surface: run configuration, tasks and output writers."""
from ness_geometry.cli.config import *  # noqa: F401, F403
from ness_geometry.cli.run import *  # noqa: F401, F403
