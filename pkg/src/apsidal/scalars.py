"""Type dispatch so the bound functions evaluate over any scalar carrier.

Every formula in :mod:`apsidal.funcs` is written once against ``+ - * /``
plus the helpers below, and then runs unchanged over plain floats, numpy
arrays, scalar :class:`~apsidal.interval.Interval` values, and vectorized
:class:`~apsidal.ivec.IntervalArray` values.  Floats and arrays give the fast
nonrigorous engine; the interval carriers give the certified one.
"""

from __future__ import annotations

import math

import numpy as np

from . import interval as _iv
from . import ivec as _ivec
from .interval import Interval
from .ivec import IntervalArray

__all__ = [
    "exp",
    "expm1",
    "is_interval",
    "log",
    "log1p",
    "lo_value",
    "hi_value",
    "pos_pow",
    "powi",
    "rpow",
    "sqrt",
]


def is_interval(x) -> bool:
    return isinstance(x, (Interval, IntervalArray))


def lo_value(x) -> float:
    """Lower endpoint of an interval carrier, the value itself otherwise."""
    if isinstance(x, Interval):
        return x.lo
    if isinstance(x, IntervalArray):
        return float(np.min(x.lo))
    if isinstance(x, np.ndarray):
        return float(np.min(x))
    return float(x)


def hi_value(x) -> float:
    if isinstance(x, Interval):
        return x.hi
    if isinstance(x, IntervalArray):
        return float(np.max(x.hi))
    if isinstance(x, np.ndarray):
        return float(np.max(x))
    return float(x)


def log(x):
    if isinstance(x, Interval):
        return _iv.ln(x)
    if isinstance(x, IntervalArray):
        return _ivec.ln(x)
    if isinstance(x, np.ndarray):
        return np.log(x)
    return math.log(x)


def exp(x):
    if isinstance(x, Interval):
        return _iv.exp(x)
    if isinstance(x, IntervalArray):
        return _ivec.exp(x)
    if isinstance(x, np.ndarray):
        return np.exp(x)
    return math.exp(x)


def sqrt(x):
    if isinstance(x, Interval):
        return _iv.sqrt(x)
    if isinstance(x, IntervalArray):
        return _ivec.sqrt(x)
    if isinstance(x, np.ndarray):
        return np.sqrt(x)
    return math.sqrt(x)


def powi(x, n: int):
    """Integer power; sign-correct through zero for interval carriers."""
    if isinstance(x, Interval):
        return _iv.pow_int(x, n)
    if isinstance(x, IntervalArray):
        return _ivec.pow_int(x, n)
    return x**n


def rpow(x, y):
    """Real power with a strictly positive base."""
    if isinstance(x, Interval):
        return _iv.pow_real(x, y if isinstance(y, Interval) else Interval.point(float(y)))
    if isinstance(x, IntervalArray):
        return _ivec.pow_real(x, y)
    if isinstance(y, Interval):
        # A float base paired with an interval exponent still needs enclosure.
        return _iv.pow_real(Interval.point(float(x)), y)
    if isinstance(y, IntervalArray):
        return _ivec.pow_real(_ivec.IntervalArray.point(np.asarray(x, dtype=float)), y)
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return np.power(x, y)
    return math.pow(x, y)


def pos_pow(x, y):
    """Real power allowing the base to touch 0; the exponent must be > 0."""
    if isinstance(x, Interval):
        return _iv.pow_nonneg(x, y if isinstance(y, Interval) else Interval.point(float(y)))
    if isinstance(x, IntervalArray):
        return _ivec.pow_nonneg(x, y)
    if isinstance(y, (Interval, IntervalArray)):
        return rpow(x, y)
    if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
        return np.power(x, y)
    return math.pow(x, y)


def expm1(x):
    """Float-path helper; not defined for interval carriers."""
    if isinstance(x, np.ndarray):
        return np.expm1(x)
    if is_interval(x):
        raise TypeError("expm1 is a float-path helper; use exp on intervals")
    return math.expm1(x)


def log1p(x):
    if isinstance(x, np.ndarray):
        return np.log1p(x)
    if is_interval(x):
        raise TypeError("log1p is a float-path helper; use log on intervals")
    return math.log1p(x)
