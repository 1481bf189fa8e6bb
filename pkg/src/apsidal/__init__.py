"""Validated numerics for the apsidal angle in power-law potentials.

The package has two faces: a float engine for exploration (orbit integration,
series diagnostics, sweep tables) and an interval engine whose directed
rounding turns grid sweeps of the bound functions into verified positivity
certificates.  ``apsidal.verifier`` drives the certification campaigns,
``apsidal.orbit`` the floating-point orbit side, and ``apsidal.cli`` wraps
both for the command line.
"""

from .interval import DomainError, Interval
from .ivec import IntervalArray

__all__ = ["DomainError", "Interval", "IntervalArray", "__version__"]

__version__ = "0.1.0"
