"""Sign-ladder and coefficient-sweep checks.

The ladder rows are rebuilt here from the public coefficient table and
compared against the expanded polynomials they must equal, so a typo in
either copy shows up as a row mismatch rather than a silent sign change.
"""

from __future__ import annotations

import json

import pytest

from apsidal.interval import DomainError, Interval
from apsidal.tail import (
    F_COEFFS,
    F_poly,
    VerificationFailure,
    default_coeff_grids,
    sign_ladder,
    tail_coeff_check,
)
from apsidal.verifier import build_grid, steps


def _row_sum(*rows):
    return tuple(sum(cs) for cs in zip(*rows))


def _eval_int(row, p):
    acc = 0
    for c in row:
        acc = acc * p + c
    return acc


# -- coefficient table -----------------------------------------------------


def test_table_shape():
    assert len(F_COEFFS) == 5
    assert all(len(row) == 6 for row in F_COEFFS)
    assert all(isinstance(c, int) for row in F_COEFFS for c in row)


def test_ladder_rows_match_expanded_polynomials():
    j0, j1, j2, j3, j4 = F_COEFFS
    assert _row_sum(j1, j2, j3, j4) == (24, -496, 4680, -24520, 65856, -68584)
    assert j4 == (-1, 19, -135, 385, -464, -44)
    assert _row_sum(
        tuple(2 * c for c in j2),
        tuple(6 * c for c in j3),
        tuple(12 * c for c in j4),
    ) == (-22, 278, -750, -4510, 33652, -62728)


def test_F_poly_endpoints_are_exact_row_values():
    j0 = F_COEFFS[0]
    total = _row_sum(*F_COEFFS)
    for p in (11, 23, 100, 200):
        assert F_poly(0.0, p) == float(_eval_int(j0, p))
        assert F_poly(1.0, p) == pytest.approx(float(_eval_int(total, p)), rel=1e-14)


def test_F_poly_rejects_low_index():
    with pytest.raises(DomainError):
        F_poly(0.5, 3)


def test_F_poly_positive_on_unit_interval_sweep():
    # concavity pushes the minimum to an endpoint, so an interval sweep at
    # step 0.01 certifies positivity directly for representative p
    cells = [Interval(i / 100, (i + 1) / 100) for i in range(100)]
    for p in (11, 15, 23, 40, 80, 200):
        for cell in cells:
            out = F_poly(cell, p)
            assert out.lo > 0.0, (p, cell.lo)


# -- sign ladder -----------------------------------------------------------


def test_sign_ladder_default_range():
    rep = sign_ladder(200)
    assert rep.status == "pass"
    assert (rep.p_min, rep.p_max) == (11, 200)
    # 4 derivative anchors at p = 11 plus 6 quantities per p
    assert len(rep.records) == 4 + 6 * 190
    assert all(rec["ok"] for rec in rep.records)


def test_sign_ladder_anchor_derivatives_frozen():
    rep = sign_ladder(11)
    anchors = rep.records[:4]
    assert [r["quantity"] for r in anchors] == [
        "f_prime",
        "f_second",
        "f_third",
        "f_fourth",
    ]
    assert [r["value"] for r in anchors] == [-13048, -7172, -3054, -864]
    assert all(r["want"] == "-" for r in anchors)


def test_sign_ladder_guard():
    with pytest.raises(DomainError):
        sign_ladder(10)


def test_sign_ladder_reproducible():
    a = sign_ladder(100)
    b = sign_ladder(100)
    assert a.records == b.records
    assert a.to_json_lines() == b.to_json_lines()


def test_report_json_lines_shape():
    rep = sign_ladder(12)
    lines = rep.to_json_lines().splitlines()
    head = json.loads(lines[0])
    assert head == {
        "kind": "sign_ladder",
        "p_min": 11,
        "p_max": 12,
        "status": "pass",
        "checks": len(rep.records),
    }
    assert len(lines) == 1 + len(rep.records)
    for line in lines[1:]:
        rec = json.loads(line)
        assert set(rec) == {"p", "quantity", "value", "want", "ok"}


# -- coefficient sweep -----------------------------------------------------


def test_coeff_check_default_passes():
    rep = tail_coeff_check()
    assert rep.status == "pass"
    assert (rep.p_min, rep.p_max) == (11, 40)
    assert len(rep.records) == 30
    assert all(rec["ok"] for rec in rep.records)
    assert all(rec["cells"] == 50 * 50 for rec in rep.records)
    worst = min(rec["min_lower"] for rec in rep.records)
    assert worst == pytest.approx(0.0052038082, rel=1e-6)


def test_coeff_check_narrow_range():
    rep = tail_coeff_check(p_range=range(11, 13))
    assert [rec["p"] for rec in rep.records] == [11, 12]


def test_coeff_check_guards():
    with pytest.raises(DomainError):
        tail_coeff_check(p_range=range(11, 11))
    with pytest.raises(DomainError):
        tail_coeff_check(p_range=range(4, 13))
    alpha_grid, _ = default_coeff_grids()
    with pytest.raises(DomainError):
        tail_coeff_check(alpha_grid=alpha_grid)


def test_coeff_check_coarse_grid_fails_loudly():
    # two cells per axis overestimate wildly; the sweep must refuse to
    # certify, and the failure lists which cells lost the sign
    coarse_a = build_grid(("alpha", steps(0.0, 1.0, 0.5)))
    coarse_s = build_grid(("s", steps(0.0, 1.0, 0.5)))
    with pytest.raises(VerificationFailure) as err:
        tail_coeff_check(coarse_a, coarse_s, p_range=range(11, 21))
    assert "sign violation" in str(err.value)
    p_vals = {p for p, _, _ in err.value.violations}
    assert p_vals <= set(range(11, 21))


def test_default_grids_are_the_documented_step():
    alpha_grid, s_grid = default_coeff_grids()
    a_pts = alpha_grid.axes[0][1]
    s_pts = s_grid.axes[0][1]
    assert len(a_pts) == 51 and len(s_pts) == 51
    assert a_pts[0] == 0.0 and a_pts[-1] == 1.0
    assert abs((a_pts[1] - a_pts[0]) - 0.02) < 1e-12
