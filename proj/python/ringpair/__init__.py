from ._ringpair import *  # noqa: F401,F403
from ._ringpair import __version__  # noqa: F401
