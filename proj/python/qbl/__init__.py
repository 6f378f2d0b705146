"""QAOA MaxCut simulation, Boltzmann-model fitting, and performance prediction."""

from qbl._core import *  # noqa: F401,F403
from qbl._core import __version__  # noqa: F401
