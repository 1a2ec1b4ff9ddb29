"""Precoded spatial modulation with a power-split receiver.

Closed-form error rates, Monte-Carlo simulation, and rate-energy sweeps,
backed by the C++ engine.  The CSV emitted by `records_to_csv` matches the
command-line tool byte for byte.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401
