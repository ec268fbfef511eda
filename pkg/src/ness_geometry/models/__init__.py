"""Model families: the boundary-driven XY chain and the dissipative XY ring."""
from ness_geometry.models.parametrized import *  # noqa: F401, F403
from ness_geometry.models.ring import *  # noqa: F401, F403
from ness_geometry.models.xy_chain import *  # noqa: F401, F403
