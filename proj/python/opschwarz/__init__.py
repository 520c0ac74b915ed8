"""Schwarz coupling of finite-element and operator-inference heat models."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
