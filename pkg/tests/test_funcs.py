"""Function-family checks: weights, A/K, the E functions, and the bounds.

Series-vs-closed-form comparisons build the series side in the test from
omega/A partial sums, so the two routes share no code.  The four Z_f spot
values were computed once with mpmath at 30 significant digits from the
factored formula and are frozen here.
"""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import apsidal.funcs as f
from apsidal.interval import DomainError, Interval

CONSTS = f.BoundConstants()

alphas_open = st.floats(min_value=0.01, max_value=0.99)
unit_open = st.floats(min_value=0.01, max_value=0.99)


# -- weights ---------------------------------------------------------------


def test_omega_small_orders():
    for alpha in (0.1, 0.5, 0.9):
        assert f.omega(alpha, 1) == alpha
        assert f.omega(alpha, 2) == pytest.approx(alpha * (1 - alpha) / 2, rel=1e-15)


def test_omega_against_product_formula():
    # (1/n!) alpha (alpha-1) ... (alpha-n+1), sign flipped to make it positive
    for alpha in (0.25, 0.5, 0.85):
        for n in (3, 5, 8, 12):
            prod = 1.0
            for k in range(n):
                prod *= alpha - k
            prod /= math.factorial(n)
            expect = -prod * (-1.0) ** n
            assert f.omega(alpha, n) == pytest.approx(expect, rel=1e-13)


@given(alphas_open, st.integers(min_value=1, max_value=50))
def test_omega_positive_inside_unit_band(alpha, n):
    assert f.omega(alpha, n) > 0.0


@given(alphas_open, st.integers(min_value=2, max_value=40))
def test_omega_tilde_defining_identity(alpha, n):
    assert f.omega(alpha, n) == pytest.approx(
        alpha * (1 - alpha) * f.omega_tilde(alpha, n), rel=1e-13
    )


def test_omega_tilde_degenerate_alphas():
    assert f.omega_tilde(0.3, 2) == 0.5
    assert f.omega_tilde(0.0, 3) == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert f.omega_tilde(1.0, 3) > 0.0


def test_weight_index_guards():
    with pytest.raises(DomainError):
        f.omega(0.5, 0)
    with pytest.raises(DomainError):
        f.omega_tilde(0.5, 1)


# -- A and K ---------------------------------------------------------------


def test_A_closed_cases():
    for s in (0.0, 0.3, 0.7, 1.0):
        assert f.A(2, s) == pytest.approx(1.0, rel=1e-15)
    for n in (2, 5, 11):
        assert f.A(n, 1.0) == pytest.approx(1.0, rel=1e-14)
    assert f.A(3, 0.5) == pytest.approx(1.5, rel=1e-15)
    assert f.A(7, 0.0) == pytest.approx(6.0, rel=1e-15)


@given(st.integers(min_value=2, max_value=30), st.floats(min_value=0.0, max_value=1.0))
def test_A_difference_identity(n, s):
    # the difference cancels two O(n) partial sums, so the achievable
    # accuracy is absolute at the scale of A(n, s), not of the small rhs
    lhs = f.A(n + 1, s) - f.A(n, s)
    rhs = (1.0 - s) ** (n - 1)
    assert abs(lhs - rhs) <= 8 * math.ulp(f.A(n + 1, s))


def test_A_decreasing_and_strictly_convex_past_the_linear_case():
    # A(3, s) = 2 - s is affine; curvature only appears from n = 4 on
    grid = [i / 40 for i in range(1, 40)]
    for n in (3, 4, 6, 15):
        vals = [f.A(n, s) for s in grid]
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        assert all(d < 0 for d in diffs)
        if n > 3:
            assert all(b - a > 0 for a, b in zip(diffs, diffs[1:]))


def test_A_interval_mode_legal_through_zero():
    out = f.A(5, Interval(0.0, 0.1))
    assert out.contains(f.A(5, 0.0)) and out.contains(f.A(5, 0.1))


def test_K_closed_cases():
    for alpha in (0.0, 0.4, 1.0):
        for n in (2, 5, 9):
            assert f.K(alpha, n, 1.0) == pytest.approx(
                (n - 1 - 2 * alpha) / (n + 1), rel=1e-13, abs=1e-15
            )
    for s in (0.0, 0.25, 0.8):
        assert f.K(0.35, 2, s) == pytest.approx(
            2 * (2 - 0.35) / 3 * f.A(3, s) - 1.0, rel=1e-14
        )


def test_K_cross_form_agreement():
    # float path uses the A-quotient definition, the interval path the
    # expanded polynomial.  The box encloses the exact value while the float
    # route carries its own few-ulp error, so ask for proximity to the box
    # rather than strict membership.
    for alpha in (0.1, 0.3, 0.9):
        for n in (3, 5, 12, 20):
            for s in (0.0, 0.25, 0.6, 1.0):
                pt = f.K(alpha, n, s)
                box = f.K(alpha, n, Interval.point(s))
                slack = 8 * math.ulp(max(abs(pt), 1.0))
                assert box.lo - slack <= pt <= box.hi + slack
                # the expanded polynomial has binomial-scale coefficients
                # cancelling to O(1), so outward rounding leaves real width
                # by n = 20; 1e-9 still pins both routes to the same value
                assert box.width <= 1e-9


def test_K_monotone_and_convex_in_s():
    grid = [i / 30 for i in range(31)]
    for alpha in (0.2, 0.8):
        for n in (3, 7, 20):
            vals = [f.K(alpha, n, s) for s in grid]
            diffs = [b - a for a, b in zip(vals, vals[1:])]
            assert all(d < 0 for d in diffs)
            assert all(b - a > 0 for a, b in zip(diffs, diffs[1:]))


def test_K_increasing_in_n():
    for alpha in (0.1, 0.5, 0.9):
        for s in (0.05, 0.4, 0.95):
            for n in range(2, 20):
                assert f.K(alpha, n + 1, s) > f.K(alpha, n, s)


@given(
    alphas_open,
    st.integers(min_value=3, max_value=20),
    st.floats(min_value=0.0, max_value=1.0),
)
def test_K_pair_diff_matches_subtraction(alpha, n, s):
    m = 2
    assert f.K_pair_diff(alpha, n, m, s) == pytest.approx(
        f.K(alpha, n, s) - f.K(alpha, m, s), rel=1e-10, abs=1e-13
    )


def test_lemma_quotient_identity_for_K5_minus_K3():
    # [(K5-K3)(s) - (K5-K3)(1)]/(1-s) equals the stated quadratic exactly.
    for alpha in (0.15, 0.5, 0.85):
        for s in (0.0, 0.2, 0.45, 0.7, 0.95):
            lhs = (
                (f.K(alpha, 5, s) - f.K(alpha, 3, s))
                - (f.K(alpha, 5, 1.0) - f.K(alpha, 3, 1.0))
            ) / (1.0 - s)
            rhs = ((2 - s) / 6) * (
                10 * s * s - 2 * alpha * s * s + 4 * alpha * s - 14 * s + 5 - alpha
            )
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-13)


# -- E, E_boundary, C_norm -------------------------------------------------


def test_E_small_q_limit():
    for alpha in (0.2, 0.5, 0.8):
        for s in (0.1, 0.5, 0.9):
            assert abs(f.E(alpha, s, 1e-8) - (1 - alpha)) < 1e-6


def test_E_vanishes_at_alpha_one():
    for s in (0.1, 0.5, 0.9):
        for q in (0.2, 0.6, 0.9):
            assert f.E(1.0, s, q) == pytest.approx(0.0, abs=1e-13)


def test_E_rejects_q_zero():
    with pytest.raises(DomainError):
        f.E(0.5, 0.3, 0.0)


def test_E_positive_decreasing_convex_in_s():
    grid = [i / 25 for i in range(26)]
    for alpha in (0.2, 0.6, 0.95):
        for q in (0.1, 0.5, 0.85):
            vals = [f.E(alpha, s, q) for s in grid]
            assert all(v > 0 for v in vals)
            diffs = [b - a for a, b in zip(vals, vals[1:])]
            assert all(d < 0 for d in diffs)
            assert all(b - a > 0 for a, b in zip(diffs, diffs[1:]))


def _E_series(alpha: float, s: float, q: float, terms: int) -> float:
    om = [f.omega(alpha, n) for n in range(1, terms + 1)]
    acc = 0.0
    for n in range(terms, 1, -1):
        acc = acc * q + om[n - 1] * f.A(n, s)
    return f.C_norm(alpha, q) * (2.0 - q) * acc


def test_E_matches_series_form():
    for alpha in (0.1, 0.5, 0.9):
        for s in (0.05, 0.5, 1.0):
            for q in (0.1, 0.6, 0.9):
                assert abs(_E_series(alpha, s, q, 200) - f.E(alpha, s, q)) < 1e-8


def test_E_boundary_closed_cases():
    assert f.E_boundary(1.0, 0.4, 1) == pytest.approx(0.0, abs=1e-14)
    near0 = f.E(0.5, 1e-9, 0.5)
    assert abs(f.E_boundary(0.5, 0.5, 0) - near0) < 1e-6
    with pytest.raises(DomainError):
        f.E_boundary(0.0, 0.5, 0)
    with pytest.raises(DomainError):
        f.E_boundary(0.5, 0.0, 1)


def test_E_boundary_sandwiches_E():
    for alpha in (0.2, 0.6, 0.95):
        for q in (0.1, 0.5, 0.85):
            top = f.E_boundary(alpha, q, 0)
            bot = f.E_boundary(alpha, q, 1)
            for s in (0.05, 0.3, 0.7, 0.95):
                mid = f.E(alpha, s, q)
                assert bot <= mid <= top


def test_C_norm_closed_cases():
    for q in (0.1, 0.5, 0.9):
        assert f.C_norm(1.0, q) == pytest.approx(1.0, rel=1e-14)
    assert f.C_norm(0.5, 0.5) == pytest.approx(0.5 / (1 - math.sqrt(0.5)), rel=1e-14)
    with pytest.raises(DomainError):
        f.C_norm(0.5, 0.0)


def _reciprocal_partial(alpha: float, q: float, terms: int) -> float:
    acc = 0.0
    for n in range(terms, 0, -1):
        acc = acc * q + f.omega(alpha, n)
    return acc


def test_C_norm_against_truncated_series():
    # 100 terms leave a genuine ~1e-6 truncation tail at q = 0.9; with 400
    # terms the product collapses to 1 at machine level, which is the real
    # content of the reciprocal-series identity.
    for alpha in (0.02, 0.3, 0.7, 0.99):
        for q in (0.1, 0.5, 0.9):
            short = f.C_norm(alpha, q) * _reciprocal_partial(alpha, q, 100)
            assert abs(short - 1.0) < 2e-6
            full = f.C_norm(alpha, q) * _reciprocal_partial(alpha, q, 400)
            assert abs(full - 1.0) < 1e-12


# -- dqE and I -------------------------------------------------------------


def test_dqE_positive_at_half():
    for alpha in (0.1, 0.5, 0.9):
        for q in (0.1, 0.5, 0.85):
            assert f.dqE(alpha, 0.5, q, 60) > 0.0


def test_dqE_matches_central_difference():
    # order 60 holds 1e-4 through q = 0.8; the truncation tail passes that
    # size just above (3.3e-3 at q = 0.85), where order 120 restores it.
    h = 1e-6
    for alpha in (0.05, 0.5, 0.95):
        for s in (0.0, 0.5, 1.0):
            for q in (0.1, 0.5, 0.8):
                cd = (f.E(alpha, s, q + h) - f.E(alpha, s, q - h)) / (2 * h)
                assert f.dqE(alpha, s, q, 60) == pytest.approx(cd, rel=1e-4)
    cd = (f.E(0.15, 0.9, 0.85 + h) - f.E(0.15, 0.9, 0.85 - h)) / (2 * h)
    assert abs(f.dqE(0.15, 0.9, 0.85, 60) / cd - 1.0) > 1e-4
    assert f.dqE(0.15, 0.9, 0.85, 120) == pytest.approx(cd, rel=1e-6)


def test_dqE_decreasing_in_s():
    grid = [i / 20 for i in range(21)]
    for alpha in (0.2, 0.7):
        for q in (0.2, 0.6):
            vals = [f.dqE(alpha, s, q, 60) for s in grid]
            assert all(b < a for a, b in zip(vals, vals[1:]))


def test_dqE_with_tail_reports_its_own_truncation():
    value, tail = f.dqE_with_tail(0.15, 0.9, 0.85, 60)
    assert value == f.dqE(0.15, 0.9, 0.85, 60)
    truth = f.dqE(0.15, 0.9, 0.85, 200)
    assert abs(value - truth) <= 4 * tail
    assert tail > 0.0


def test_I_direct_positive_on_sampled_box():
    n = 12
    for i in range(1, n):
        alpha = i / n
        for j in range(1, n):
            s = 0.5 * j / n
            for k in range(1, n):
                q = k / n
                assert f.I_direct(alpha, s, q) > 0.0


def test_I_direct_vanishes_at_alpha_one():
    assert abs(f.I_direct(1 - 1e-6, 0.25, 0.5)) < 1e-4


def test_I_direct_matches_coefficient_series():
    for alpha in (0.2, 0.5, 0.8):
        for s in (0.1, 0.25, 0.45):
            for q in (0.1, 0.3, 0.5):
                acc = 0.0
                for p in range(40, 3, -1):
                    acc = acc * q + f.Q_coeff(alpha, p, s, q)
                series = f.C_norm(alpha, q) ** 2 * acc
                assert series == pytest.approx(f.I_direct(alpha, s, q), rel=1e-3)


# -- T and Q coefficients --------------------------------------------------


def test_T_coeff_at_s_one_matches_direct_sum():
    # K_n(1) = (n-1-2alpha)/(n+1), so the s = 1 value reduces to a plain
    # weighted pair sum minus the omega_2 correction.
    for alpha in (0.15, 0.5, 0.85):
        for p in (11, 17, 29):
            acc = 0.0
            for n in range(2, p - 1):
                m = p - 1 - n
                acc += (
                    f.omega(alpha, n)
                    * f.omega(alpha, m)
                    * (n - m)
                    * (n - 1 - 2 * alpha)
                    / (n + 1)
                )
            acc -= 2 * f.omega(alpha, 2) * f.omega(alpha, p - 2) * (p - 3)
            assert f.T_coeff(alpha, p, 1.0) == pytest.approx(acc, rel=1e-9, abs=1e-14)


def test_T_coeff_sign_structure():
    assert f.T_coeff(0.9, 4, 0.98) < 0.0
    for p in range(11, 41, 4):
        for alpha in (0.1, 0.5, 0.9):
            for s in (0.0, 0.5, 1.0):
                assert f.T_coeff(alpha, p, s) > 0.0


def test_T_coeff_pair_sum_dominates_correction_at_s_one():
    # the anchor inequality behind the p >= 11 positivity: at s = 1 the
    # weighted pair sum exceeds twice the omega_2 omega_{p-2} (p-3) term.
    for alpha in (0.1, 0.5, 0.9):
        for p in (11, 20, 35):
            pair_sum = 0.0
            for n in range(2, p - 1):
                m = p - 1 - n
                pair_sum += (
                    f.omega(alpha, n)
                    * f.omega(alpha, m)
                    * (n - m)
                    * (n - 1 - 2 * alpha)
                    / (n + 1)
                )
            correction = 2 * f.omega(alpha, 2) * f.omega(alpha, p - 2) * (p - 3)
            assert pair_sum >= correction


def test_T_coeff_factored_is_the_weight_normalized_form():
    for alpha in (0.2, 0.5, 0.8):
        for p in (11, 16, 25):
            for s in (0.1, 0.5, 0.9):
                assert f.T_coeff(alpha, p, s) == pytest.approx(
                    alpha * alpha * (1 - alpha) * f.T_coeff_factored(alpha, p, s),
                    rel=1e-12,
                )


def test_Q_coeff_assembles_from_T_and_E():
    for alpha in (0.3, 0.7):
        for p in (5, 12):
            for s, q in ((0.1, 0.3), (0.4, 0.6)):
                expect = f.T_coeff(alpha, p, s) * (1 + f.E(alpha, 1 - s, q)) ** 2
                expect += f.T_coeff(alpha, p, 1 - s) * (1 + f.E(alpha, s, q)) ** 2
                assert f.Q_coeff(alpha, p, s, q) == pytest.approx(expect, rel=1e-12)


# -- R_tilde and the radial bounds -----------------------------------------


def test_R_tilde_at_q_zero():
    for alpha in (0.0, 0.4, 1.0):
        for s in (0.0, 0.3, 0.8, 1.0):
            expect = (1.0 - 2.0 * s) * (2.0 - alpha) / 6.0
            assert f.R_tilde(alpha, s, 0.0) == pytest.approx(expect, rel=1e-13, abs=1e-15)
            assert f.R_tilde(alpha, s, 0.0) == pytest.approx(
                -f.R_tilde(alpha, 1.0 - s, 0.0), rel=1e-13, abs=1e-15
            )


def test_R_tilde_matches_term_sum():
    alpha, s, q = 0.5, 0.25, 0.5
    acc = 0.0
    for p in range(4, 11):
        acc += (
            f.omega_tilde(alpha, p - 2)
            * (p - 3)
            * (f.K(alpha, p - 2, s) - (1 - alpha))
            * q ** (p - 4)
        )
    assert f.R_tilde(alpha, s, q) == pytest.approx(acc, rel=1e-12)


def test_N_fun_zeros_and_sign():
    for q in (0.9, 0.95, 0.99):
        assert f.N_fun(0.0, q) == pytest.approx(0.0, abs=1e-14)
        assert f.N_fun(1.0, q) == pytest.approx(0.0, abs=1e-14)
    # near q = 1 the (1-q)^alpha factor controls the decay:
    # (1e-12)^0.5 * N_tilde(0.5, 1) * 0.25 is about 2.5e-7
    assert abs(f.N_fun(0.5, 1 - 1e-12)) < 1e-6
    assert f.N_fun(0.5, 0.95) > 0.0
    with pytest.raises(DomainError):
        f.N_fun(0.5, Interval(0.95, 1.0))


def test_N_tilde_endpoint_and_factorization():
    assert f.N_tilde(0.5, 1.0) == pytest.approx(1.0, rel=1e-13)
    assert f.N_tilde(0.4, 0.95) > 0.005
    for alpha in (0.2, 0.5, 0.79):
        for q in (0.9, 0.97):
            factored = (1 - q) ** alpha * f.N_tilde(alpha, q) * alpha * alpha / q
            assert f.N_fun(alpha, q) == pytest.approx(factored, rel=1e-10)


def test_N0_pair_bands_and_values():
    assert f.N0_pair(0.05, 0.92, CONSTS, "plain") > 0.0
    for alpha in (0.0, 0.08, 0.15):
        assert f.N0_pair(alpha, 1.0, CONSTS, "tilde") > 0.0
    with pytest.raises(DomainError):
        f.N0_pair(0.05, 0.5, CONSTS, "plain")
    with pytest.raises(DomainError):
        f.N0_pair(0.05, 0.91, CONSTS, "tilde")


def test_N1_pair_band_and_consistency():
    assert f.N1_pair(0.9, 0.95, CONSTS, "plain") > 0.0
    for alpha in (0.85, 0.95):
        for q in (0.91, 0.96):
            lhs = f.N_fun(alpha, q) / (1 - alpha) / (1 - q)
            assert lhs > f.N1_pair(alpha, q, CONSTS, "plain")
    with pytest.raises(DomainError):
        f.N1_pair(0.9, 0.5, CONSTS, "plain")


def test_M_f_symmetry_and_sign():
    assert f.M_f(0.5, 0.2, 0.3, CONSTS) > 0.0
    val = f.M_f(0.3, 0.5, 0.2, CONSTS)
    assert math.isfinite(val)
    for alpha in (0.0, 0.5, 1.0):
        assert math.isfinite(f.M_f(alpha, 0.0, 0.0, CONSTS))


_Z_SPOTS = [
    # frozen mpmath evaluations of the cleared-denominator form
    (0.4, 0.384, 0.4, 0.0152114193),
    (0.2, 0.1, 0.6, 0.7498014875),
    (0.05, 0.3, 0.85, 14.4193397087),
    (0.35, 0.45, 0.5, 0.0799912510),
]


@pytest.mark.parametrize("alpha,s,q,expect", _Z_SPOTS)
def test_Z_f_frozen_spot_values(alpha, s, q, expect):
    assert f.Z_f(alpha, s, q) == pytest.approx(expect, rel=1e-7)


def test_Z_f_regular_at_alpha_zero():
    for s in (0.0, 0.25, 0.5):
        for q in (0.4, 0.7, 0.9):
            assert math.isfinite(f.Z_f(0.0, s, q))


@given(alphas_open, unit_open)
def test_log_lower_bound_on_binomial_deficit(alpha, q):
    lhs = 1 - (1 - q) ** alpha
    log1mq = math.log(1 - q)
    rhs = -alpha * log1mq - (alpha * alpha / 2) * log1mq * log1mq
    assert lhs > rhs


def test_I_tilde_f_symmetric_point_identity():
    for alpha in (0.5, 0.8):
        for q in (0.45, 0.7):
            eb0 = 1 + f.E_boundary(alpha, q, 0)
            eb1 = 1 + f.E_boundary(alpha, q, 1)
            expect = f.R_tilde(alpha, 0.5, q) * (eb1 * eb1 + eb0 * eb0)
            assert f.I_tilde_f(alpha, 0.5, q) == pytest.approx(expect, rel=1e-12)


def test_I_tilde_f_rejects_singular_cells():
    with pytest.raises(DomainError):
        f.I_tilde_f(Interval(0.0, 0.5), 0.25, 0.5)
    with pytest.raises(DomainError):
        f.I_tilde_f(0.5, 0.25, Interval(0.0, 0.5))


# -- parameter triple and interval/float consistency -----------------------


def test_alpha_qs_validation():
    f.AlphaQS(0.5, 0.5, 0.5).validate()
    f.AlphaQS(Interval(0.1, 0.2), Interval(0.0, 1.0), Interval(0.0, 0.5)).validate()
    with pytest.raises(DomainError):
        f.AlphaQS(1.5, 0.5, 0.5).validate()
    with pytest.raises(DomainError):
        f.AlphaQS(Interval(0.9, 1.1), 0.5, 0.5).validate()
    with pytest.raises(DomainError):
        f.AlphaQS(0.5, 0.5, 1.0).validate()


_POINT_CASES = [
    ("A", lambda a, s, q: f.A(7, s)),
    ("K", lambda a, s, q: f.K(a, 9, s)),
    ("R_tilde", lambda a, s, q: f.R_tilde(a, s, q)),
    ("T_coeff_factored", lambda a, s, q: f.T_coeff_factored(a, 13, s)),
    ("N_tilde", lambda a, s, q: f.N_tilde(a, 0.9 + q / 10)),
    ("M_f", lambda a, s, q: f.M_f(a, s / 2, q / 3, CONSTS)),
    ("Z_f", lambda a, s, q: f.Z_f(a / 3, s / 2, 0.4 + q / 2)),
]


@pytest.mark.parametrize("name,op", _POINT_CASES, ids=[c[0] for c in _POINT_CASES])
def test_interval_point_contains_float(name, op):
    for a in (0.2, 0.5, 0.75):
        for s in (0.1, 0.5, 0.9):
            for q in (0.1, 0.5, 0.8):
                want = op(a, s, q)
                got = op(Interval.point(a), Interval.point(s), Interval.point(q))
                assert got.contains(want), (name, a, s, q)
