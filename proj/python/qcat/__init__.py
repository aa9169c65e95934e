"""Qudit circuits as typed tensor-network diagrams with certified rewriting."""

from ._qcat import *  # noqa: F401,F403
from ._qcat import __doc__  # noqa: F401

__version__ = "0.1.0"
