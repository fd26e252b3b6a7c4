"""Inference across sampling time scales for a compound Poisson process
with symmetric unit jumps.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._timescales import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
