"""Normal basis generators of wildly ramified extensions in characteristic p."""

from .basefield import (INF, FqElement, FqField, LaurentSeries, default_precision,
                        get_field, working_precision)
from .errors import *  # noqa: F401,F403
from .extfield import ArtinSchreier, Radical, Tower, TowerElement, TowerMap, Unramified
from .kernels import BACKEND

__version__ = "0.1.0"
