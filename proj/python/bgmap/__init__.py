"""Constrained MAP support recovery for Bernoulli-Gaussian sparse signals.

Thin wrapper over the compiled extension; see the project README for usage.
"""

from ._bgmap import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
