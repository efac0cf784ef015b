"""Numerical checks for Hardy-type and Copson-type series inequalities."""

from steckin._core import *  # noqa: F401,F403
from steckin._core import __doc__  # noqa: F401
