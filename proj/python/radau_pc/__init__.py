"""Radau IIA stage systems with the lower-triangular Kronecker preconditioner."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
