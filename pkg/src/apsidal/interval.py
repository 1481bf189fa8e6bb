"""Scalar interval arithmetic with outward rounding.

The kernel works on closed intervals [lo, hi] of finite doubles and keeps the
inclusion property: the result of any operation contains every real obtainable
by applying the exact operation to members of the operands.

Rounding policy
---------------
No FPU rounding-mode switching.  Every arithmetic step is evaluated in the
default round-to-nearest mode and the endpoint is then pushed outward with
``math.nextafter``.  Round-to-nearest is off by at most half an ulp, so one
step outward is rigorous and costs at most one extra ulp per operation.

Addition and subtraction refine this: the exact rounding error of a float
sum is itself a float (Shewchuk's two-sum), so its sign tells whether the
rounded result already lies on the needed side.  Exact sums like 1 - q for
q in [0.5, 2] then keep exact endpoints, which matters when downstream
domain checks distinguish "touches 0" from "crosses 0".

Elementary functions (log, exp, pow) are taken from libm, which on the
platforms we target is correctly rounded or within 1 ulp for these functions;
their endpoints are pushed outward by a fixed guard of GUARD_ULPS steps.
``sqrt`` is exactly rounded per IEEE 754 and gets a single outward step.

There is no empty interval: any operation that would leave the domain raises
:class:`DomainError` instead.  All values are immutable, so intervals can be
shared freely between worker processes.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "Interval",
    "arith",
    "elem",
    "exp",
    "hull_width_contains",
    "ln",
    "pow_int",
    "pow_nonneg",
    "pow_real",
    "sqrt",
]

GUARD_ULPS = 2

_INF = math.inf


class DomainError(ValueError):
    """An interval operation left its mathematical domain."""


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _guard_up(x: float, steps: int = GUARD_ULPS) -> float:
    for _ in range(steps):
        x = math.nextafter(x, _INF)
    return x


def _guard_down(x: float, steps: int = GUARD_ULPS) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -_INF)
    return x


def _sum_down(a: float, b: float) -> float:
    """Largest float known to be <= the real a + b."""
    s = a + b
    bv = s - a
    err = (a - (s - bv)) + (b - bv)
    if err >= 0.0:
        return s
    return _down(s)


def _sum_up(a: float, b: float) -> float:
    """Smallest float known to be >= the real a + b."""
    s = a + b
    bv = s - a
    err = (a - (s - bv)) + (b - bv)
    if err <= 0.0:
        return s
    return _up(s)


@dataclass(frozen=True, slots=True)
class Interval:
    """Closed interval with finite endpoints, lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo = float(self.lo)
        hi = float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"non-finite endpoint in [{lo}, {hi}]")
        if lo > hi:
            raise DomainError(f"inverted endpoints [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        m = 0.5 * (self.lo + self.hi)
        # Guard against midpoints drifting outside thin intervals.
        return min(max(m, self.lo), self.hi)

    def contains(self, other: Interval | float) -> bool:
        if isinstance(other, Interval):
            return self.lo <= other.lo and other.hi <= self.hi
        return self.lo <= other <= self.hi

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def __repr__(self) -> str:
        return f"[{self.lo!r}, {self.hi!r}]"

    # -- arithmetic -------------------------------------------------------
    # Unknown operand types get NotImplemented back so that mixed
    # expressions with the vectorized kernel fall through to its
    # reflected operators.

    def __add__(self, other: Interval | float) -> Interval:
        o = _as_interval(other)
        if o is None:
            return NotImplemented
        return Interval(_sum_down(self.lo, o.lo), _sum_up(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other: Interval | float) -> Interval:
        o = _as_interval(other)
        if o is None:
            return NotImplemented
        return Interval(_sum_down(self.lo, -o.hi), _sum_up(self.hi, -o.lo))

    def __rsub__(self, other: float) -> Interval:
        o = _as_interval(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Interval | float) -> Interval:
        o = _as_interval(other)
        if o is None:
            return NotImplemented
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(p)), _up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other: Interval | float) -> Interval:
        o = _as_interval(other)
        if o is None:
            return NotImplemented
        if o.lo <= 0.0 <= o.hi:
            raise DomainError(f"division by {o} which contains 0")
        p = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return Interval(_down(min(p)), _up(max(p)))

    def __rtruediv__(self, other: float) -> Interval:
        o = _as_interval(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self) -> Interval:
        # Negation is exact in binary floating point.
        return Interval(-self.hi, -self.lo)

    def __pow__(self, n: int) -> Interval:
        if not isinstance(n, int):
            return NotImplemented
        return pow_int(self, n)


def _as_interval(x: Interval | float) -> Interval | None:
    if isinstance(x, Interval):
        return x
    if isinstance(x, numbers.Real):
        return Interval(float(x), float(x))
    return None


def arith(a: Interval, b: Interval, op: str) -> Interval:
    """Dispatch the four basic operations by name."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# -- elementary functions -------------------------------------------------


def ln(x: Interval) -> Interval:
    if x.lo <= 0.0:
        raise DomainError(f"log of {x} touching nonpositive reals")
    return Interval(_guard_down(math.log(x.lo)), _guard_up(math.log(x.hi)))


def exp(x: Interval) -> Interval:
    try:
        lo = math.exp(x.lo)
        hi = math.exp(x.hi)
    except OverflowError as err:
        raise DomainError(f"exp overflow on {x}") from err
    return Interval(max(0.0, _guard_down(lo)), _guard_up(hi))


def sqrt(x: Interval) -> Interval:
    if x.lo < 0.0:
        raise DomainError(f"sqrt of {x} crossing negative reals")
    # IEEE sqrt is exactly rounded; one outward step suffices.
    return Interval(max(0.0, _down(math.sqrt(x.lo))), _up(math.sqrt(x.hi)))


def _pow_mag_down(x: float, n: int) -> float:
    """Lower bound of x**n for x >= 0, by directed binary exponentiation."""
    acc = 1.0
    base = x
    k = n
    while k:
        if k & 1:
            acc = _down(acc * base)
        k >>= 1
        if k:
            base = _down(base * base)
    return max(acc, 0.0)


def _pow_mag_up(x: float, n: int) -> float:
    acc = 1.0
    base = x
    k = n
    while k:
        if k & 1:
            acc = _up(acc * base)
        k >>= 1
        if k:
            base = _up(base * base)
    if not math.isfinite(acc):
        raise DomainError(f"integer power overflow: {x}**{n}")
    return acc


def pow_int(x: Interval, n: int) -> Interval:
    """x**n for integer n, with even/odd sign handling through zero."""
    if n == 0:
        return Interval(1.0, 1.0)
    if n < 0:
        if x.lo <= 0.0 <= x.hi:
            raise DomainError(f"negative power of {x} which contains 0")
        return Interval(1.0, 1.0) / pow_int(x, -n)
    if n % 2 == 0:
        hi_mag = max(-x.lo, x.hi)
        if x.lo <= 0.0 <= x.hi:
            lo_mag = 0.0
        else:
            lo_mag = min(abs(x.lo), abs(x.hi))
        return Interval(_pow_mag_down(lo_mag, n), _pow_mag_up(hi_mag, n))
    lo = -_pow_mag_up(-x.lo, n) if x.lo < 0.0 else _pow_mag_down(x.lo, n)
    hi = -_pow_mag_down(-x.hi, n) if x.hi < 0.0 else _pow_mag_up(x.hi, n)
    return Interval(lo, hi)


def pow_real(base: Interval, exponent: Interval) -> Interval:
    """base**exponent for a strictly positive base.

    x^y is monotone in x for fixed y and in y for fixed x (x > 0), so the
    range over the box is attained at the four corners.  Each corner is one
    libm ``pow`` call; the outer endpoints then take the elementary-function
    guard.  Composing exp(y*log x) in interval steps instead would stack the
    rounding of three operations and roughly quadruple the width.
    """
    if base.lo <= 0.0:
        raise DomainError(f"real power of {base} touching nonpositive reals")
    try:
        corners = (
            math.pow(base.lo, exponent.lo),
            math.pow(base.lo, exponent.hi),
            math.pow(base.hi, exponent.lo),
            math.pow(base.hi, exponent.hi),
        )
    except OverflowError as err:
        raise DomainError(f"pow overflow on {base}**{exponent}") from err
    lo = _guard_down(min(corners))
    hi = _guard_up(max(corners))
    if not math.isfinite(hi):
        raise DomainError(f"pow overflow on {base}**{exponent}")
    return Interval(max(0.0, lo), hi)


def pow_nonneg(base: Interval, exponent: Interval) -> Interval:
    """base**exponent allowing the base to touch 0, for positive exponents.

    The campaigns evaluate (1-q)^beta on cells whose upper q endpoint is
    exactly 1; there the base interval is [0, b] and x^beta -> 0 as x -> 0+,
    so the exact lower endpoint is 0 and the upper endpoint comes from the
    corners at x = b.
    """
    if base.lo < 0.0:
        raise DomainError(f"real power of {base} crossing negative reals")
    if exponent.lo <= 0.0:
        raise DomainError(
            f"exponent {exponent} must be strictly positive when the base touches 0"
        )
    if base.lo > 0.0:
        return pow_real(base, exponent)
    if base.hi == 0.0:
        return Interval(0.0, 0.0)
    try:
        top = max(math.pow(base.hi, exponent.lo), math.pow(base.hi, exponent.hi))
    except OverflowError as err:
        raise DomainError(f"pow overflow on {base}**{exponent}") from err
    return Interval(0.0, _guard_up(top))


def elem(x: Interval, fn: str, n: int | None = None) -> Interval:
    """Dispatch the elementary functions by name (``pow_int`` needs n)."""
    if fn == "ln":
        return ln(x)
    if fn == "exp":
        return exp(x)
    if fn == "sqrt":
        return sqrt(x)
    if fn == "pow_int":
        if n is None:
            raise ValueError("pow_int requires the exponent n")
        return pow_int(x, n)
    raise ValueError(f"unknown elementary function {fn!r}")


def hull_width_contains(x: Interval) -> tuple[float, bool, bool]:
    """(width rounded up, whether 0 is inside, whether the interval is > 0)."""
    return _up(x.hi - x.lo), x.lo <= 0.0 <= x.hi, x.lo > 0.0
