"""The named bound functions of the monotonicity proof.

Everything here is written once against the scalar-dispatch helpers in
:mod:`apsidal.scalars`, so each function evaluates over plain floats, numpy
arrays, scalar intervals, or vectorized interval arrays.  Float mode is the
fast diagnostic engine; interval mode is what the verification campaigns
certify with.

Naming sticks to the mathematical objects: ``omega`` are the binomial
weights, ``A``/``K`` the two polynomial families built from them, ``E`` the
effective-potential ratio entering the apsidal-angle integrand, ``T_coeff``
the series coefficients of the q-derivative identity, and ``N_fun``/
``N0_pair``/``N1_pair``/``N_tilde``/``R_tilde``/``I_tilde_f``/``M_f``/``Z_f``
the endpoint-slope and finite-part bound functions whose positivity the
campaigns establish band by band.

Band guards are hard preconditions: each bound function refuses arguments
outside the validity band of its derivation, because using a bound off its
band silently would be exactly the mistake the piecewise construction exists
to prevent.

Interval-mode polynomial evaluation (A, K, and the functions built on them)
uses Horner form on the expanded representation, which stays defined on
s-intervals containing 0.  ``K_pair_diff`` is the deliberate exception: the
differences K_n - K_m telescope into a short explicit form whose enclosure
stays tight for large n, and the series-tail positivity checks depend on
that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import scalars as sc
from .interval import DomainError, Interval
from .ivec import IntervalArray

__all__ = [
    "AlphaQS",
    "BoundConstants",
    "A",
    "C_norm",
    "E",
    "E_boundary",
    "I_direct",
    "I_tilde_f",
    "K",
    "K_pair_diff",
    "M_f",
    "N0_pair",
    "N1_pair",
    "N_fun",
    "N_tilde",
    "Q_coeff",
    "R_tilde",
    "T_coeff",
    "T_coeff_factored",
    "Z_f",
    "dqE",
    "dqE_with_tail",
    "omega",
    "omega_tilde",
]

# Enclosure of Euler's number for interval-mode chord constants.
_E_IV = Interval(math.nextafter(math.e, 0.0), math.nextafter(math.e, 4.0))


def _interval_mode(*xs) -> bool:
    return any(sc.is_interval(x) for x in xs)


def _one_like(x):
    """Exact 1 in the carrier (and shape) of x."""
    if isinstance(x, Interval):
        return Interval(1.0, 1.0)
    if isinstance(x, IntervalArray):
        return IntervalArray.point(np.ones_like(x.lo))
    if isinstance(x, np.ndarray):
        return np.ones_like(x, dtype=float)
    return 1.0


@dataclass(frozen=True)
class AlphaQS:
    """Parameter triple (alpha, s, q); carrier may be float or interval."""

    alpha: object
    s: object
    q: object

    def validate(self) -> None:
        if not (0.0 <= sc.lo_value(self.alpha) and sc.hi_value(self.alpha) <= 1.0):
            raise DomainError(f"alpha={self.alpha} outside [0, 1]")
        if not (0.0 <= sc.lo_value(self.s) and sc.hi_value(self.s) <= 1.0):
            raise DomainError(f"s={self.s} outside [0, 1]")
        if not (0.0 <= sc.lo_value(self.q) and sc.hi_value(self.q) < 1.0):
            raise DomainError(f"q={self.q} outside [0, 1)")


@dataclass(frozen=True)
class BoundConstants:
    """Thresholds splitting the (alpha, q) strip into the proof's bands."""

    alpha_bar: float = 0.15
    alpha_hat: float = 0.8
    q_bar: float = 0.4
    alpha_0: float = 0.4

    def q_max(self, alpha):
        """1 - exp(-4/(1-alpha)); upper end of the plain-N0 band."""
        return 1.0 - sc.exp(-4.0 / (1.0 - alpha))

    @property
    def q_hat(self) -> float:
        return 1.0 - math.exp(-4.0 / self.alpha_hat)

    def q_hat_interval(self) -> Interval:
        a = Interval.point(self.alpha_hat)
        return 1.0 - sc.exp(-4.0 / a)

    @property
    def log_one_minus_q_hat(self) -> float:
        # 1 - q_hat = exp(-4/alpha_hat) by definition, so the log is exact.
        return -4.0 / self.alpha_hat


_DEFAULT_BANDS = BoundConstants()


def _band_check(name: str, x, lo: float, hi: float) -> None:
    if sc.lo_value(x) < lo or sc.hi_value(x) > hi:
        raise DomainError(f"{name}={x} outside the band [{lo}, {hi}]")


# -- weights --------------------------------------------------------------


def omega(alpha, n: int):
    """Binomial weight -C(alpha, n)(-1)^n via the rational recursion."""
    if n < 1:
        raise DomainError(f"weight index n={n} must be >= 1")
    w = alpha
    for k in range(2, n + 1):
        w = w * ((k - 1) - alpha) / k
    return w


def omega_tilde(alpha, n: int):
    """omega / (alpha(1-alpha)), finite and positive at alpha in {0, 1}.

    Starts from the exact value 1/2 at n=2 and follows the same rational
    recursion, so the removable factor never enters.
    """
    if n < 2:
        raise DomainError(f"reduced weight index n={n} must be >= 2")
    w = 0.5
    for k in range(3, n + 1):
        w = w * ((k - 1) - alpha) / k
    return w


# -- the A and K polynomial families --------------------------------------


def A(n: int, s):
    """(1 - (1-s)^(n-1))/s with its limit n-1 at s=0, and A_2 = 1 exactly.

    Interval carriers go through the geometric partial sum
    sum_{j=0}^{n-2} (1-s)^j, which is the same function with the division
    carried out: every term is nonnegative, so the enclosure width stays
    first-order in the cell width for any n, and s-cells touching 0 or 1
    are legal.
    """
    if n < 2:
        raise DomainError(f"A index n={n} must be >= 2")
    if n == 2:
        return _one_like(s)
    if sc.is_interval(s):
        x = 1.0 - s
        acc = 1.0 + x * 0.0
        for _ in range(n - 2):
            acc = 1.0 + x * acc
        return acc
    return _a_float(n, s)


def _a_float(n: int, s):
    if isinstance(s, np.ndarray):
        out = np.empty_like(s, dtype=float)
        at0 = s == 0.0
        out[at0] = n - 1
        sn = s[~at0]
        with np.errstate(divide="ignore"):
            out[~at0] = -np.expm1((n - 1) * np.log1p(-sn)) / sn
        return out
    if s == 0.0:
        return float(n - 1)
    if s == 1.0:
        return 1.0
    return -sc.expm1((n - 1) * sc.log1p(-s)) / s


def _a_tight(n: int, s):
    if sc.is_interval(s):
        return A(n, s)
    if n == 2:
        return _one_like(s)
    return _a_float(n, s)


def K(alpha, n: int, s):
    """2(n-alpha)/(n+1) A_{n+1}(s) - A_n(s); polynomial form for intervals."""
    if n < 2:
        raise DomainError(f"K index n={n} must be >= 2")
    if sc.is_interval(s) or sc.is_interval(alpha):
        return K_via_poly(alpha, n, s)
    return K_via_defn(alpha, n, s)


def K_via_defn(alpha, n: int, s):
    return 2.0 * (n - alpha) / (n + 1) * A(n + 1, s) - A(n, s)


def K_via_poly(alpha, n: int, s):
    """The expanded s-polynomial, continuous at s=0, Horner-evaluated.

    Coefficients are built as (exact integer)*(n - alpha)/(exact integer) so
    that interval alpha enters each coefficient exactly once.
    """
    n_alpha = n - alpha
    # Descending powers s^(n-1), s^(n-2), ..., s^1, s^0.
    coeffs = [(-2 * (-1) ** n) * n_alpha / (n + 1)]
    for k in range(n - 1, 1, -1):
        b = math.comb(n - 1, k) * (-1) ** k
        coeffs.append(b - (2 * n * b) * n_alpha / ((n + 1) * (n - k)))
    acc = coeffs[0]
    for c in coeffs[1:]:
        acc = acc * s + c
    const = ((n * n + 1) - (2 * n) * alpha) / (n + 1)
    return acc * s + const


def _k_tight(alpha, n: int, s):
    """K through the geometric-sum A (series-tail use, any n)."""
    if sc.is_interval(s) or sc.is_interval(alpha):
        return 2.0 * (n - alpha) / (n + 1) * A(n + 1, s) - A(n, s)
    return K_via_defn(alpha, n, s)


def K_pair_diff(alpha, n: int, m: int, s):
    """K_n(s) - K_m(s) for n > m >= 2, in telescoped form.

    Since A_{j+1}(s) - A_j(s) = (1-s)^(j-1) exactly, the difference
    collapses to

        2(n-m)(1+alpha)/((n+1)(m+1)) * A_{m+1}(s)
          + (2(n-alpha)(1-s)/(n+1) - 1) * sum_{j=m-1}^{n-2} (1-s)^j,

    which resolves the near-cancellation between K_n and K_m algebraically
    instead of leaving it to interval subtraction.  That is what keeps
    tail-coefficient enclosures usable at large n.
    """
    if not n > m >= 2:
        raise DomainError(f"pair difference needs n > m >= 2, got ({n}, {m})")
    x = 1.0 - s
    geo = _one_like(s)
    for _ in range(n - m - 1):
        geo = 1.0 + x * geo
    geo = sc.powi(x, m - 1) * geo
    lead = (2 * (n - m)) * (1.0 + alpha) / ((n + 1) * (m + 1))
    return lead * _a_tight(m + 1, s) + ((2.0 * x) * (n - alpha) / (n + 1) - 1.0) * geo


# -- the E family ---------------------------------------------------------


def E(alpha, s, q):
    """The effective-potential ratio entering the angle integrand.

    Float path: cancellation-safe via expm1/log1p, with the s in {0,1}
    boundary values and the alpha = 0 logarithmic branch (the latter is a
    plotting convenience only).  Interval path: the closed form, requiring
    s and q strictly interior so the divisions are defined.
    """
    if _interval_mode(alpha, s, q):
        one_m_s = 1.0 - s
        denom = 1.0 - sc.rpow(1.0 - q, alpha)
        inner = 1.0 - sc.rpow(1.0 - q * one_m_s, alpha)
        return ((2.0 - q) / (q * s)) * (1.0 - inner / (one_m_s * denom))
    return _e_float(alpha, s, q)


def _e_float(alpha, s, q):
    if sc.lo_value(q) <= 0.0:
        raise DomainError("E requires q > 0; the q->0 limit is 1 - alpha")
    if alpha == 0.0:
        one_m_s = 1.0 - s
        return ((2.0 - q) / (q * s)) * (
            1.0 - sc.log1p(-q * one_m_s) / (one_m_s * sc.log1p(-q))
        )
    if not isinstance(s, np.ndarray):
        if s == 0.0:
            return E_boundary(alpha, q, 0)
        if s == 1.0:
            return E_boundary(alpha, q, 1)
    one_m_s = 1.0 - s
    denom = -sc.expm1(alpha * sc.log1p(-q))
    inner = -sc.expm1(alpha * sc.log1p(-q * one_m_s))
    return ((2.0 - q) / (q * s)) * (1.0 - inner / (one_m_s * denom))


def E_boundary(alpha, q, which: int):
    """Closed forms of E at s=0 and s=1 (which = 0 / 1)."""
    if which not in (0, 1):
        raise ValueError(f"which={which} must be 0 or 1")
    if sc.lo_value(q) <= 0.0 or sc.lo_value(alpha) <= 0.0:
        raise DomainError("E_boundary is indeterminate at q=0 or alpha=0")
    if _interval_mode(alpha, q):
        denom = 1.0 - sc.rpow(1.0 - q, alpha)
    else:
        denom = -sc.expm1(alpha * sc.log1p(-q))
    if which == 0:
        return ((2.0 - q) / q) * (
            -1.0 + alpha * q * sc.rpow(1.0 - q, alpha - 1.0) / denom
        )
    return ((2.0 - q) / q) * (1.0 - alpha * q / denom)


def C_norm(alpha, q):
    """q/(1 - (1-q)^alpha), the closed form of the reciprocal weight series."""
    if sc.lo_value(q) <= 0.0:
        raise DomainError("C_norm is indeterminate at q=0")
    if _interval_mode(alpha, q):
        return q / (1.0 - sc.rpow(1.0 - q, alpha))
    return q / -sc.expm1(alpha * sc.log1p(-q))


# -- series diagnostics (float mode) --------------------------------------


def dqE(alpha, s, q, order: int = 60):
    """Truncated double series of the q-derivative of E (float mode)."""
    return dqE_with_tail(alpha, s, q, order)[0]


def dqE_with_tail(alpha, s, q, order: int = 60):
    """(value, geometric tail estimate |last shell| * q/(1-q) * C^2)."""
    if order < 4:
        raise DomainError(f"series order {order} must be >= 4")
    omegas = [0.0, alpha]
    for k in range(2, order):
        omegas.append(omegas[-1] * (k - 1 - alpha) / k)
    a_vals = {n: A(n, s) for n in range(2, order)}
    total = 0.0
    last_shell = 0.0
    for p in range(3, order + 1):
        shell = 0.0
        for n in range(2, p):
            m = p - n
            shell += (
                omegas[n]
                * omegas[m]
                * ((2.0 - q) * (n - m) - 2.0)
                * a_vals[n]
                * q ** (p - 4)
            )
        total += shell
        last_shell = shell
    c = C_norm(alpha, q)
    tail = abs(last_shell) * q / (1.0 - q) * c * c
    return c * c * total, tail


def _dq_central(alpha, s, q, h: float = 1e-6):
    return (E(alpha, s, q + h) - E(alpha, s, q - h)) / (2.0 * h)


def I_direct(alpha, s, q):
    """dqE(s)(1+E(1-s))^2 + dqE(1-s)(1+E(s))^2 by central differences."""
    e_s = E(alpha, s, q)
    e_1ms = E(alpha, 1.0 - s, q)
    return (
        _dq_central(alpha, s, q) * (1.0 + e_1ms) ** 2
        + _dq_central(alpha, 1.0 - s, q) * (1.0 + e_s) ** 2
    )


# -- series coefficients --------------------------------------------------


def T_coeff(alpha, p: int, s):
    """Coefficient of q^(p-4) in the series of dqE/C^2."""
    if p < 4:
        raise DomainError(f"series index p={p} must be >= 4")
    total = None
    for n in range(2, p - 1):
        m = p - 1 - n
        term = omega(alpha, n) * omega(alpha, m) * (n - m) * K(alpha, n, s)
        total = term if total is None else total + term
    corr = 2.0 * omega(alpha, 2) * omega(alpha, p - 2) * (p - 3)
    return total - corr


def T_coeff_factored(alpha, p: int, s):
    """T_coeff / (alpha^2 (1-alpha)), nonzero on the closed alpha range.

    Evaluated in the paired form
        sum_{n>m>=2, n+m=p-1} (1-alpha) wt_n wt_m (n-m) (K_n(s) - K_m(s))
        + wt_{p-2} (p-3) (K_{p-2}(s) - (1-alpha)),
    with the K-differences through :func:`K_pair_diff`, which keeps the
    symmetric cancellation of the double sum inside single terms instead of
    losing it to enclosure widening.
    """
    if p < 4:
        raise DomainError(f"series index p={p} must be >= 4")
    one_m_alpha = 1.0 - alpha
    wts = {}
    w = 0.5
    for k in range(2, p - 1):
        if k > 2:
            w = w * ((k - 1) - alpha) / k
        wts[k] = w
    total = wts[p - 2] * (p - 3) * (_k_tight(alpha, p - 2, s) - one_m_alpha)
    for n in range(2, p - 1):
        m = p - 1 - n
        if m < 2 or n <= m:
            continue
        total = total + one_m_alpha * wts[n] * wts[m] * (n - m) * K_pair_diff(
            alpha, n, m, s
        )
    return total


def Q_coeff(alpha, p: int, s, q):
    """T(s)(1+E(1-s,q))^2 + T(1-s)(1+E(s,q))^2, the full series coefficient."""
    e_s = E(alpha, s, q)
    e_1ms = E(alpha, 1.0 - s, q)
    return (
        T_coeff(alpha, p, s) * (1.0 + e_1ms) ** 2
        + T_coeff(alpha, p, 1.0 - s) * (1.0 + e_s) ** 2
    )


# -- endpoint-slope bound functions (q >= 0.9 strip) ----------------------


def N_fun(alpha, q):
    """N(alpha,q), the q=1 endpoint slope numerator; needs q bounded below 1."""
    _band_check("alpha", alpha, 0.0, 1.0)
    if sc.hi_value(q) >= 1.0:
        raise DomainError("N_fun needs q < 1; use N_tilde for cells touching 1")
    if sc.lo_value(q) < 0.9:
        raise DomainError(f"N_fun band is q in [0.9, 1); got {q}")
    x = 1.0 - q
    pa = sc.pos_pow(x, alpha) if sc.lo_value(alpha) > 0.0 else sc.rpow(x, alpha)
    one_m = 1.0 - pa
    return (
        -(2.0 / q) * x * one_m * one_m
        + alpha * q * x * one_m
        + (2.0 - q) * alpha * alpha * q * pa
    )


def N0_pair(alpha, q, consts: BoundConstants, form: str):
    """The two bounds covering alpha near 0: plain on [0.9, q_max], tilde above.

    The band ends at q_max(alpha) are evaluated on the conservative side: the
    plain band extends to the upper enclosure endpoint and the tilde band
    starts at the lower one, so the two checks overlap rather than leave a gap.
    """
    _band_check("alpha", alpha, 0.0, consts.alpha_bar)
    qmax_enc = consts.q_max(Interval(sc.lo_value(alpha), sc.hi_value(alpha)))
    if form == "plain":
        _band_check("q", q, 0.9, qmax_enc.hi)
        return _n0_plain(alpha, q, consts)
    if form == "tilde":
        _band_check("q", q, qmax_enc.lo, 1.0)
        return _n0_tilde(alpha, q, consts)
    raise ValueError(f"form={form!r} must be 'plain' or 'tilde'")


def _n0_plain(alpha, q, consts: BoundConstants):
    x = 1.0 - q
    l = sc.log(x)
    xp = sc.rpow(x, 1.0 - alpha)
    inner1 = 1.0 + 0.5 * alpha * l
    inner2 = 1.0 + 0.5 * sc.rpow(x, consts.alpha_bar) * alpha * l
    return (
        -(2.0 / q) * xp * l * l * inner1 * inner1
        - xp * l * inner2
        + (2.0 - q) * q
    )


def _n0_chord(alpha, q, iv: bool):
    """The line through (q_max, 4/(e(1-alpha))) and (1, 0).

    1 - q_max = exp(-4/(1-alpha)) exactly, so the slope denominator is
    written as that exponential rather than a rounded q_max.
    """
    fmax = 4.0 / ((_E_IV if iv else math.e) * (1.0 - alpha))
    return fmax * (1.0 - q) * sc.exp(4.0 / (1.0 - alpha))


def _n0_tilde(alpha, q, consts: BoundConstants):
    x = 1.0 - q
    iv = _interval_mode(alpha, q)
    fmax = 4.0 / ((_E_IV if iv else math.e) * (1.0 - alpha))
    chord = _n0_chord(alpha, q, iv)
    quarter = (1.0 - alpha) / 4.0
    f2 = fmax * fmax
    return (
        -(alpha * alpha / (2.0 * q)) * f2 * f2
        + (2.0 * alpha / q) * sc.pos_pow(x, quarter) * chord * chord * chord
        - sc.pos_pow(x, 2.0 * quarter)
        * (2.0 / q + 0.5 * alpha * sc.pos_pow(x, consts.alpha_bar))
        * f2
        + sc.pos_pow(x, 3.0 * quarter) * chord
        + (2.0 - q) * q
    )


def N1_pair(alpha, q, consts: BoundConstants, form: str):
    """The two bounds covering alpha near 1: plain on [0.9, q_hat], tilde above."""
    _band_check("alpha", alpha, consts.alpha_hat, 1.0)
    qhat_enc = consts.q_hat_interval()
    if form == "plain":
        _band_check("q", q, 0.9, qhat_enc.hi)
        return _n1_plain(alpha, q, consts)
    if form == "tilde":
        _band_check("q", q, qhat_enc.lo, 1.0)
        return _n1_tilde(alpha, q, consts)
    raise ValueError(f"form={form!r} must be 'plain' or 'tilde'")


def _n1_plain(alpha, q, consts: BoundConstants):
    x = 1.0 - q
    l = sc.log(x)
    one_m_a = 1.0 - alpha
    l2 = l * l
    bracket = (
        -2.0 * x * x / q
        + 2.0 * x
        - (alpha / 2.0) * q * sc.rpow(x, consts.alpha_hat)
        + ((2.0 - q) / 2.0) * q * alpha * alpha
    )
    return (
        (-2.0 * q * (1.0 + alpha) + alpha * q * q)
        + l * (-4.0 * x + alpha * q * x - alpha * alpha * q * (2.0 - q))
        + one_m_a * l2 * bracket
        + one_m_a * one_m_a * (2.0 / q) * x * x * l2 * l
        - one_m_a * one_m_a * one_m_a * (x * x / (2.0 * q)) * l2 * l2
    )


def _n1_chord(q, consts: BoundConstants, iv: bool):
    """R2: the line through (q_hat, 4/(e*alpha_hat)) and (1, 0).

    The slope constant uses exp(-1 + 4/alpha_hat), with 1 - q_hat written as
    exp(-4/alpha_hat) exactly.
    """
    ah = consts.alpha_hat
    if iv:
        gmax = 4.0 / (_E_IV * ah)
        e_m4 = sc.exp(Interval.point(-4.0 / ah))
        slope = -(4.0 / ah) * sc.exp(Interval.point(-1.0 + 4.0 / ah))
    else:
        gmax = 4.0 / (math.e * ah)
        e_m4 = math.exp(-4.0 / ah)
        slope = -(4.0 / ah) * math.exp(-1.0 + 4.0 / ah)
    return slope * (q - 1.0 + e_m4) + gmax


def _n1_tilde(alpha, q, consts: BoundConstants):
    ah = consts.alpha_hat
    x = 1.0 - q
    one_m_a = 1.0 - alpha
    iv = _interval_mode(alpha, q)
    gmax = 4.0 / ((_E_IV if iv else math.e) * ah)
    r2 = _n1_chord(q, consts, iv)
    lqh = consts.log_one_minus_q_hat
    g2 = gmax * gmax
    return (
        (-2.0 * q * (1.0 + alpha) + alpha * q * q)
        + r2 * (4.0 - alpha * q) * sc.pos_pow(x, 1.0 - ah / 4.0)
        + one_m_a
        * r2
        * r2
        * (
            -(2.0 / q) * sc.pos_pow(x, 2.0 - ah / 2.0)
            + 2.0 * sc.pos_pow(x, 1.0 - ah / 2.0)
            + (alpha / 2.0) * q * sc.pos_pow(x, ah / 2.0)
        )
        - one_m_a * one_m_a * (2.0 / q) * sc.pos_pow(x, 2.0 - 0.75 * ah) * g2 * gmax
        - one_m_a * one_m_a * one_m_a * (sc.pos_pow(x, 2.0 - ah) / (2.0 * q)) * g2 * g2
        - (2.0 - q) * alpha * q * lqh
        + one_m_a * alpha * alpha * q * ((2.0 - q) / 2.0) * lqh * lqh
    )


def N_tilde(alpha, q):
    """(q/alpha^2) times the (1-q)^alpha-factored endpoint slope numerator.

    The alpha^2 in the last term cancels exactly, so the product is expanded
    before evaluation; this keeps interval enclosures tight near q = 1 where
    every surviving term carries a power of (1-q).
    """
    _band_check("alpha", alpha, _DEFAULT_BANDS.alpha_bar, _DEFAULT_BANDS.alpha_hat)
    _band_check("q", q, 0.9, 1.0)
    x = 1.0 - q
    xq = sc.pos_pow(x, 1.0 - alpha)
    one_m = 1.0 - sc.pos_pow(x, alpha)
    a2 = alpha * alpha
    return (
        -2.0 * xq * one_m * one_m / a2
        + q * q * xq * one_m / alpha
        + (2.0 - q) * q * q
    )


# -- finite-part bound functions (q <= 0.9) -------------------------------


def R_tilde(alpha, s, q):
    """sum_{p=4}^{10} wt_{p-2} (p-3) (K_{p-2}(s) - (1-alpha)) q^(p-4).

    The boundary-term truncation of the factored series: the positive
    (n, m) pair contributions are dropped, so this is a valid lower bound
    of the full bracket wherever it multiplies a nonnegative factor.
    """
    _band_check("alpha", alpha, 0.0, 1.0)
    _band_check("s", s, 0.0, 1.0)
    _band_check("q", q, 0.0, 0.9)
    one_m_alpha = 1.0 - alpha
    coeffs = [
        omega_tilde(alpha, p - 2) * (p - 3) * (K(alpha, p - 2, s) - one_m_alpha)
        for p in range(4, 11)
    ]
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * q + c
    return acc


def I_tilde_f(alpha, s, q):
    """R(s,q)(1+E(1,q))^2 + R(1-s,q)(1+E(0,q))^2 with closed boundary forms."""
    _band_check("alpha", alpha, _DEFAULT_BANDS.alpha_0, 1.0)
    _band_check("s", s, 0.0, 0.5)
    _band_check("q", q, _DEFAULT_BANDS.q_bar, 0.9)
    eb1 = 1.0 + E_boundary(alpha, q, 1)
    eb0 = 1.0 + E_boundary(alpha, q, 0)
    return R_tilde(alpha, s, q) * eb1 * eb1 + R_tilde(alpha, 1.0 - s, q) * eb0 * eb0


def M_f(alpha, s, q, consts: BoundConstants):
    """Taylor-at-q=0 lower bound for the finite part, divided by q.

    E0/E1 are the endpoint slope bounds of E over [0, q_bar]; the square
    factors (2-alpha+q E)^2 are constants of the p-sums and multiply them
    once.  Everything is polynomial in (alpha, s, q) plus one fixed power
    (1-q_bar)^(alpha-3), so the whole expression is interval-evaluable on
    cells touching q=0, s=0 and alpha in {0, 1}.
    """
    _band_check("alpha", alpha, 0.0, 1.0)
    _band_check("s", s, 0.0, 0.5)
    _band_check("q", q, 0.0, consts.q_bar)
    one_m_alpha = 1.0 - alpha
    two_m_alpha = 2.0 - alpha
    c = one_m_alpha * two_m_alpha / 6.0
    w = sc.rpow(1.0 - consts.q_bar, alpha - 3.0)
    e0 = c * (1.0 + w * q)
    e1 = -c
    first = (
        (1.0 - 2.0 * s)
        * two_m_alpha
        / 6.0
        * (2.0 * two_m_alpha * (e1 - e0) + q * (e1 * e1 - e0 * e0))
    )
    f1 = two_m_alpha + q * e1
    f0 = two_m_alpha + q * e0
    sum_s = None
    sum_1ms = None
    for p in range(10, 4, -1):
        wt = omega_tilde(alpha, p - 2) * (p - 3)
        c_s = wt * (K(alpha, p - 2, s) - one_m_alpha)
        c_1ms = wt * (K(alpha, p - 2, 1.0 - s) - one_m_alpha)
        sum_s = c_s if sum_s is None else sum_s * q + c_s
        sum_1ms = c_1ms if sum_1ms is None else sum_1ms * q + c_1ms
    return first + sum_s * f1 * f1 + sum_1ms * f0 * f0


def Z_f(alpha, s, q):
    """The log-bounded finite part with its q^2 D^2 denominator cleared.

    D = -log(1-q) - (alpha/2) log^2(1-q) is the series lower bound of
    1-(1-q)^alpha divided by alpha; clearing q^2 D^2 leaves
        R(s,q) (2D - (2-q)q)^2 + R(1-s,q) ((2-q)q(1-q)^(alpha-1) - 2(1-q)D)^2,
    which is regular at alpha = 0.
    """
    _band_check("alpha", alpha, 0.0, _DEFAULT_BANDS.alpha_0)
    _band_check("s", s, 0.0, 0.5)
    _band_check("q", q, _DEFAULT_BANDS.q_bar, 0.9)
    x = 1.0 - q
    l = -sc.log(x)
    d = l - (alpha / 2.0) * l * l
    b1 = 2.0 * d - (2.0 - q) * q
    b0 = (2.0 - q) * q * sc.rpow(x, alpha - 1.0) - 2.0 * x * d
    return R_tilde(alpha, s, q) * b1 * b1 + R_tilde(alpha, 1.0 - s, q) * b0 * b0
