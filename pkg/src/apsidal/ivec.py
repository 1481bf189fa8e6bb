"""Vectorized interval arithmetic over numpy endpoint arrays.

Mirror of :mod:`apsidal.interval` for arrays of intervals, used by the grid
campaigns: one :class:`IntervalArray` holds the lower and upper endpoints of
many cells at once, and the generic bound functions evaluate on it through the
same operator surface as the scalar kernel.  Shapes broadcast like numpy
arrays, so a sweep builds one axis-shaped operand per grid dimension and lets
broadcasting form the product grid.

The rounding policy is the scalar kernel's (round to nearest, then step
outward with nextafter, with the two-sum refinement that exact additions keep
exact endpoints), with one difference: elementary functions take a guard of
4 ulp instead of 2, because numpy may route log/exp/pow through SIMD code
paths whose worst-case error is not pinned down as tightly as scalar libm's.
Multiplication and division keep the single unconditional outward step.
"""

from __future__ import annotations

import numpy as np

from .interval import DomainError, Interval

__all__ = ["IntervalArray", "VEC_GUARD_ULPS"]

VEC_GUARD_ULPS = 4

_INF = np.inf


def _up(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a, _INF)


def _down(a: np.ndarray) -> np.ndarray:
    return np.nextafter(a, -_INF)


def _guard_up(a: np.ndarray, steps: int = VEC_GUARD_ULPS) -> np.ndarray:
    for _ in range(steps):
        a = np.nextafter(a, _INF)
    return a


def _guard_down(a: np.ndarray, steps: int = VEC_GUARD_ULPS) -> np.ndarray:
    for _ in range(steps):
        a = np.nextafter(a, -_INF)
    return a


def _sum_down(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise largest floats known to be <= the real a + b (two-sum)."""
    s = a + b
    bv = s - a
    err = (a - (s - bv)) + (b - bv)
    return np.where(err >= 0.0, s, _down(s))


def _sum_up(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise smallest floats known to be >= the real a + b (two-sum)."""
    s = a + b
    bv = s - a
    err = (a - (s - bv)) + (b - bv)
    return np.where(err <= 0.0, s, _up(s))


class IntervalArray:
    """Array of closed intervals, stored as two float64 endpoint arrays."""

    __slots__ = ("lo", "hi")

    # Keep numpy from absorbing us into object arrays: binary ufuncs with an
    # ndarray on the left then defer to our reflected operators.
    __array_ufunc__ = None

    def __init__(self, lo, hi, _checked: bool = False):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.shape != hi.shape:
            lo, hi = np.broadcast_arrays(lo, hi)
            lo = np.ascontiguousarray(lo)
            hi = np.ascontiguousarray(hi)
        if not _checked:
            if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
                raise DomainError("non-finite endpoints in interval array")
            if np.any(lo > hi):
                raise DomainError("inverted endpoints in interval array")
        self.lo = lo
        self.hi = hi

    @classmethod
    def point(cls, a) -> IntervalArray:
        a = np.asarray(a, dtype=np.float64)
        return cls(a, a.copy())

    @classmethod
    def from_breakpoints(cls, b) -> IntervalArray:
        """Cells [b[i], b[i+1]] of an ascending breakpoint vector."""
        b = np.asarray(b, dtype=np.float64)
        if b.ndim != 1 or b.size < 2:
            raise ValueError("breakpoints must be a 1-d vector of length >= 2")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly ascending")
        return cls(b[:-1].copy(), b[1:].copy(), _checked=True)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.lo.shape

    @property
    def size(self) -> int:
        return self.lo.size

    def reshape(self, shape) -> IntervalArray:
        return IntervalArray(self.lo.reshape(shape), self.hi.reshape(shape), _checked=True)

    def item(self, idx) -> Interval:
        return Interval(float(self.lo[idx]), float(self.hi[idx]))

    def __repr__(self) -> str:
        return f"IntervalArray(shape={self.shape}, lo={self.lo!r}, hi={self.hi!r})"

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> IntervalArray:
        o = _lift(other)
        return IntervalArray(_sum_down(self.lo, o.lo), _sum_up(self.hi, o.hi), _checked=True)

    __radd__ = __add__

    def __sub__(self, other) -> IntervalArray:
        o = _lift(other)
        return IntervalArray(_sum_down(self.lo, -o.hi), _sum_up(self.hi, -o.lo), _checked=True)

    def __rsub__(self, other) -> IntervalArray:
        return _lift(other) - self

    def __mul__(self, other) -> IntervalArray:
        o = _lift(other)
        p1 = self.lo * o.lo
        p2 = self.lo * o.hi
        p3 = self.hi * o.lo
        p4 = self.hi * o.hi
        lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        return IntervalArray(_down(lo), _up(hi), _checked=True)

    __rmul__ = __mul__

    def __truediv__(self, other) -> IntervalArray:
        o = _lift(other)
        if np.any((o.lo <= 0.0) & (o.hi >= 0.0)):
            raise DomainError("division by an interval array containing 0")
        p1 = self.lo / o.lo
        p2 = self.lo / o.hi
        p3 = self.hi / o.lo
        p4 = self.hi / o.hi
        lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        return IntervalArray(_down(lo), _up(hi), _checked=True)

    def __rtruediv__(self, other) -> IntervalArray:
        return _lift(other) / self

    def __neg__(self) -> IntervalArray:
        return IntervalArray(-self.hi, -self.lo, _checked=True)

    def __pow__(self, n: int) -> IntervalArray:
        if not isinstance(n, int):
            return NotImplemented
        return pow_int(self, n)


def _lift(x) -> IntervalArray:
    if isinstance(x, IntervalArray):
        return x
    if isinstance(x, Interval):
        return IntervalArray(np.float64(x.lo), np.float64(x.hi), _checked=True)
    if isinstance(x, (int, float, np.floating, np.integer, np.ndarray)):
        a = np.asarray(x, dtype=np.float64)
        if not np.all(np.isfinite(a)):
            raise DomainError("non-finite operand")
        return IntervalArray(a, a, _checked=True)
    raise TypeError(f"cannot interpret {type(x).__name__} as an interval array")


# -- elementary functions -------------------------------------------------


def ln(x: IntervalArray) -> IntervalArray:
    if np.any(x.lo <= 0.0):
        raise DomainError("log of an interval array touching nonpositive reals")
    return IntervalArray(_guard_down(np.log(x.lo)), _guard_up(np.log(x.hi)), _checked=True)


def exp(x: IntervalArray) -> IntervalArray:
    hi = _guard_up(np.exp(x.hi))
    if not np.all(np.isfinite(hi)):
        raise DomainError("exp overflow in interval array")
    lo = np.maximum(0.0, _guard_down(np.exp(x.lo)))
    return IntervalArray(lo, hi, _checked=True)


def sqrt(x: IntervalArray) -> IntervalArray:
    if np.any(x.lo < 0.0):
        raise DomainError("sqrt of an interval array crossing negative reals")
    return IntervalArray(
        np.maximum(0.0, _down(np.sqrt(x.lo))), _up(np.sqrt(x.hi)), _checked=True
    )


def _pow_mag_down(x: np.ndarray, n: int) -> np.ndarray:
    acc = np.ones_like(x)
    base = x
    k = n
    while k:
        if k & 1:
            acc = _down(acc * base)
        k >>= 1
        if k:
            base = _down(base * base)
    return np.maximum(acc, 0.0)


def _pow_mag_up(x: np.ndarray, n: int) -> np.ndarray:
    acc = np.ones_like(x)
    base = x
    k = n
    while k:
        if k & 1:
            acc = _up(acc * base)
        k >>= 1
        if k:
            base = _up(base * base)
    if not np.all(np.isfinite(acc)):
        raise DomainError(f"integer power overflow in interval array (n={n})")
    return acc


def pow_int(x: IntervalArray, n: int) -> IntervalArray:
    if n == 0:
        one = np.ones_like(x.lo)
        return IntervalArray(one, one.copy(), _checked=True)
    if n < 0:
        if np.any((x.lo <= 0.0) & (x.hi >= 0.0)):
            raise DomainError("negative power of an interval array containing 0")
        return _lift(1.0) / pow_int(x, -n)
    if n % 2 == 0:
        hi_mag = np.maximum(-x.lo, x.hi)
        straddles = (x.lo <= 0.0) & (x.hi >= 0.0)
        lo_mag = np.where(straddles, 0.0, np.minimum(np.abs(x.lo), np.abs(x.hi)))
        return IntervalArray(_pow_mag_down(lo_mag, n), _pow_mag_up(hi_mag, n), _checked=True)
    lo = np.where(x.lo < 0.0, -_pow_mag_up(np.maximum(-x.lo, 0.0), n), _pow_mag_down(np.maximum(x.lo, 0.0), n))
    hi = np.where(x.hi < 0.0, -_pow_mag_down(np.maximum(-x.hi, 0.0), n), _pow_mag_up(np.maximum(x.hi, 0.0), n))
    return IntervalArray(lo, hi, _checked=True)


def pow_real(base: IntervalArray, exponent: IntervalArray | Interval | float) -> IntervalArray:
    """Corner-evaluated base**exponent for strictly positive bases."""
    e = _lift(exponent)
    if np.any(base.lo <= 0.0):
        raise DomainError("real power of an interval array touching nonpositive reals")
    with np.errstate(over="ignore"):
        c1 = np.power(base.lo, e.lo)
        c2 = np.power(base.lo, e.hi)
        c3 = np.power(base.hi, e.lo)
        c4 = np.power(base.hi, e.hi)
    lo = np.minimum(np.minimum(c1, c2), np.minimum(c3, c4))
    hi = _guard_up(np.maximum(np.maximum(c1, c2), np.maximum(c3, c4)))
    if not np.all(np.isfinite(hi)):
        raise DomainError("pow overflow in interval array")
    return IntervalArray(np.maximum(0.0, _guard_down(lo)), hi, _checked=True)


def pow_nonneg(base: IntervalArray, exponent: IntervalArray | Interval | float) -> IntervalArray:
    """base**exponent allowing zero-touching bases, for positive exponents.

    With y > 0 and x >= 0, x^y is increasing in x, so the infimum sits at
    x = base.lo (exactly 0 when the base touches 0) and the supremum at
    x = base.hi; each side only needs its own two exponent corners.
    """
    e = _lift(exponent)
    if np.any(base.lo < 0.0):
        raise DomainError("real power of an interval array crossing negative reals")
    if np.any(e.lo <= 0.0):
        raise DomainError("exponent must be strictly positive for a base touching 0")
    lo_zero = base.lo <= 0.0
    hi_zero = base.hi <= 0.0
    blo = np.where(lo_zero, 1.0, base.lo)
    bhi = np.where(hi_zero, 1.0, base.hi)
    with np.errstate(over="ignore"):
        lo_c = np.minimum(np.power(blo, e.lo), np.power(blo, e.hi))
        hi_c = np.maximum(np.power(bhi, e.lo), np.power(bhi, e.hi))
    lo = np.where(lo_zero, 0.0, np.maximum(0.0, _guard_down(lo_c)))
    hi = np.where(hi_zero, 0.0, _guard_up(hi_c))
    if not np.all(np.isfinite(hi)):
        raise DomainError("pow overflow in interval array")
    return IntervalArray(lo, hi, _checked=True)
