"""Python bindings for the hamlb C++ core."""

from ._hamlb import *  # noqa: F401,F403
from ._hamlb import __version__  # noqa: F401
