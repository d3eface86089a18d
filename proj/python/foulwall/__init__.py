"""Crystallization-fouling wall-function engine.

Thin python surface over the C++ core: wall laws, the subgrid wall-cell
solver, interface boundary conditions, the two-step reference model, the
channel surrogate and scenario runs.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
