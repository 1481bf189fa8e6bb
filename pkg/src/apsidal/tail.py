"""Sign verification for the high-order series coefficients.

The positivity of the series coefficients for p >= 11 rests on one explicit
bivariate quintic F(alpha, p) together with a derivative ladder in alpha:
the third alpha-derivative at alpha = 1 is positive and the second is
negative, so F is concave in alpha with controlled endpoint behaviour, and
endpoint positivity plus the negativity of the alpha^4 row close the
argument.  Everything here is integer arithmetic: the coefficient table is
exact, each ladder row is an exact integer combination of its rows, and a
check at integer p is an exact integer comparison, so a run is reproducible
bit for bit.

Interval arithmetic cannot quantify over all integers, so :func:`sign_ladder`
checks an explicit finite range (default 11..200); extending the conclusion
beyond the checked range is the analytic argument's job, and reports state
the checked range only.  :func:`tail_coeff_check` corroborates the same
claim from the other end, sweeping the factored series coefficient over an
(alpha, s) interval grid for each p in range.  The factored form carries
the alpha^2(1-alpha) prefactor removed, which is what makes a closed-cell
sweep possible at all: the raw coefficient is exactly zero on the alpha
edges, while the factored one stays positive on the closed square and its
positivity implies the raw coefficient's on the open alpha interval.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .interval import DomainError
from .ivec import IntervalArray
from . import funcs
from .verifier import GridSpec, build_grid, steps

__all__ = [
    "F_COEFFS",
    "TailReport",
    "VerificationFailure",
    "F_poly",
    "default_coeff_grids",
    "sign_ladder",
    "tail_coeff_check",
]


class VerificationFailure(Exception):
    """A sign check failed; ``violations`` lists (p, quantity, value)."""

    def __init__(self, violations: list[tuple[int, str, float]]):
        self.violations = violations
        shown = ", ".join(
            f"(p={p}, {q}, {v})" for p, q, v in violations[:5]
        )
        more = "" if len(violations) <= 5 else f" and {len(violations) - 5} more"
        super().__init__(f"{len(violations)} sign violation(s): {shown}{more}")


# Rows of the quintic in p, one per power of alpha (0..4), highest power of
# p first.  The alpha^4 row is the polynomial called f below.
F_COEFFS: tuple[tuple[int, ...], ...] = (
    (36, -884, 7860, -31700, 58344, -39416),
    (50, -900, 6940, -28620, 60450, -49920),
    (-35, 565, -3405, 7855, -1000, -12380),
    (10, -180, 1280, -4140, 6870, -6240),
    (-1, 19, -135, 385, -464, -44),
)


def _eval_int(row: tuple[int, ...], p: int) -> int:
    acc = 0
    for c in row:
        acc = acc * p + c
    return acc


def _row_sum(*rows: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sum(cs) for cs in zip(*rows))


def _row_scale(k: int, row: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(k * c for c in row)


def _row_derivative(row: tuple[int, ...]) -> tuple[int, ...]:
    n = len(row) - 1
    return tuple(c * (n - i) for i, c in enumerate(row[:-1]))


_J0, _J1, _J2, _J3, _J4 = F_COEFFS

# Ladder rows, exact integer combinations of the table rows.
_D3_AT_1 = _row_sum(_row_scale(6, _J3), _row_scale(24, _J4))
_D2_AT_1 = _row_sum(_row_scale(2, _J2), _row_scale(6, _J3), _row_scale(12, _J4))
_F1_MINUS_F0 = _row_sum(_J1, _J2, _J3, _J4)
_F_AT_0 = _J0
_F_AT_1 = _row_sum(_J0, _J1, _J2, _J3, _J4)

_F_ROW = _J4
_F_DERIVS = []
_row = _F_ROW
for _ in range(4):
    _row = _row_derivative(_row)
    _F_DERIVS.append(_row)


def F_poly(alpha, p: int):
    """The quintic, Horner in alpha of the exact row values at integer p."""
    if p < 4:
        raise DomainError(f"series index p={p} must be >= 4")
    rows = [_eval_int(r, p) for r in F_COEFFS]
    acc = float(rows[-1]) * _one(alpha)
    for r in reversed(rows[:-1]):
        acc = acc * alpha + float(r)
    return acc


def _one(alpha):
    # exact multiplicative unit in alpha's carrier so the alpha^4 row is
    # carried as a value, not a bare float, before the first product
    return alpha * 0.0 + 1.0


@dataclass
class TailReport:
    """Outcome of a sign sweep; one record per individual check."""

    kind: str
    p_min: int
    p_max: int
    status: str
    records: list[dict] = field(default_factory=list)

    def to_json_lines(self) -> str:
        head = {
            "kind": self.kind,
            "p_min": self.p_min,
            "p_max": self.p_max,
            "status": self.status,
            "checks": len(self.records),
        }
        lines = [json.dumps(head, sort_keys=True)]
        lines.extend(json.dumps(rec, sort_keys=True) for rec in self.records)
        return "\n".join(lines) + "\n"


_LADDER = (
    ("d3F_alpha1", _D3_AT_1, 1),
    ("d2F_alpha1", _D2_AT_1, -1),
    ("f", _F_ROW, -1),
    ("F1_minus_F0", _F1_MINUS_F0, 1),
    ("F0", _F_AT_0, 1),
    ("F1", _F_AT_1, 1),
)

_F_DERIV_NAMES = ("f_prime", "f_second", "f_third", "f_fourth")


def sign_ladder(p_max: int = 200) -> TailReport:
    """Exact-integer sign checks for every p in 11..p_max.

    Raises VerificationFailure on the first full pass if any check fails;
    otherwise returns the report.  The four derivative rows of f are
    checked once at p = 11, where the ladder anchors.
    """
    if p_max < 11:
        raise DomainError(f"p_max={p_max} must be >= 11")
    records: list[dict] = []
    violations: list[tuple[int, str, float]] = []

    def check(p: int, quantity: str, value: int, want: int) -> None:
        ok = value > 0 if want > 0 else value < 0
        records.append(
            {
                "p": p,
                "quantity": quantity,
                "value": value,
                "want": "+" if want > 0 else "-",
                "ok": ok,
            }
        )
        if not ok:
            violations.append((p, quantity, value))

    for name, row, want in zip(_F_DERIV_NAMES, _F_DERIVS, (-1, -1, -1, -1)):
        check(11, name, _eval_int(row, 11), want)
    for p in range(11, p_max + 1):
        for name, row, want in _LADDER:
            check(p, name, _eval_int(row, p), want)

    if violations:
        raise VerificationFailure(violations)
    return TailReport(
        kind="sign_ladder",
        p_min=11,
        p_max=p_max,
        status="pass",
        records=records,
    )


def default_coeff_grids() -> tuple[GridSpec, GridSpec]:
    """The 0.02-step unit-square grids the coefficient sweep uses."""
    return (
        build_grid(("alpha", steps(0.0, 1.0, 0.02))),
        build_grid(("s", steps(0.0, 1.0, 0.02))),
    )


def tail_coeff_check(
    alpha_grid: GridSpec | None = None,
    s_grid: GridSpec | None = None,
    p_range: range = range(11, 41),
) -> TailReport:
    """Certify the factored series coefficient positive on the grid per p.

    Each p gets one record with the cell count and the certified minimum
    over all (alpha, s) cells.  A cell whose enclosure does not stay above
    zero is a violation; they are collected across the whole range and
    raised together.
    """
    if len(p_range) == 0:
        raise DomainError("p_range is empty")
    if min(p_range) < 11:
        raise DomainError(f"p_range starts at {min(p_range)}; must be >= 11")
    if alpha_grid is None and s_grid is None:
        alpha_grid, s_grid = default_coeff_grids()
    if alpha_grid is None or s_grid is None:
        raise DomainError("pass both grids or neither")

    a_cells = IntervalArray.from_breakpoints(alpha_grid.axes[0][1])
    s_cells = IntervalArray.from_breakpoints(s_grid.axes[0][1])
    a2 = IntervalArray(a_cells.lo[:, None], a_cells.hi[:, None])
    s2 = IntervalArray(s_cells.lo[None, :], s_cells.hi[None, :])

    records: list[dict] = []
    violations: list[tuple[int, str, float]] = []
    for p in p_range:
        out = funcs.T_coeff_factored(a2, p, s2)
        lo = np.asarray(out.lo)
        min_lower = float(np.min(lo))
        for i, j in zip(*np.nonzero(lo <= 0.0)):
            violations.append(
                (
                    p,
                    f"coeff_cell[alpha={a_cells.lo[i]:.6g}..{a_cells.hi[i]:.6g},"
                    f"s={s_cells.lo[j]:.6g}..{s_cells.hi[j]:.6g}]",
                    float(lo[i, j]),
                )
            )
        records.append(
            {
                "p": p,
                "cells": lo.size,
                "min_lower": min_lower,
                "ok": bool(min_lower > 0.0),
            }
        )

    if violations:
        raise VerificationFailure(violations)
    return TailReport(
        kind="coeff_grid",
        p_min=min(p_range),
        p_max=max(p_range),
        status="pass",
        records=records,
    )
