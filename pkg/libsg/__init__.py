from .exceptions import *  # noqa: F403
from .streams import *  # noqa: F403
from .rng import *  # noqa: F403
from .libsg import *  # noqa: F403
