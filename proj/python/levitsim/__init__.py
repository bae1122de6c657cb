"""Python interface to the levitsim toolkit."""

from ._levitsim import *  # noqa: F401,F403
from ._levitsim import __version__  # noqa: F401
