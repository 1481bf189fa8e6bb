"""Grid campaigns that certify positivity of the bound functions.

A campaign covers a closed box in (alpha, q) or (alpha, s, q) with a grid of
closed cells, evaluates an interval enclosure of one bound function on every
cell, and passes only if each cell's lower endpoint is strictly positive.
The minimum lower bound over the grid is reported next to a reference value;
references are regression guides (good to about ten percent), positivity is
the pass criterion.

Determinism matters more than speed here.  Cells are evaluated in chunks of
a fixed cell count, never sized by the worker count, and chunk results are
merged in index order, so ``min_lower`` and the failure list come out
bit-identical whether the sweep ran serial or on a pool.  Wall time and the
start timestamp are quarantined in the ``timing`` field; two reports of the
same campaign agree byte for byte once that field is dropped.

Two campaigns (N0, N0_tilde) tie each cell's q-range to the alpha-dependent
cutoff q_max, so their grids are built one alpha-cell at a time; q_max is
evaluated in interval arithmetic over the cell, the plain form sweeps q up
to its upper endpoint and the tilde form starts from its lower endpoint, so
the two ranges overlap and no gap opens between them.  The remaining six
campaigns are plain Cartesian products.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from functools import partial
from multiprocessing import get_context
from pathlib import Path
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import funcs
from .funcs import BoundConstants
from .interval import DomainError, Interval
from .ivec import IntervalArray

__all__ = [
    "CAMPAIGNS",
    "CampaignReport",
    "GridSpec",
    "adaptive_refine",
    "build_grid",
    "chain",
    "equispaced",
    "parse_config",
    "run_campaign",
    "steps",
    "sweep",
]

#: Cells per evaluation chunk.  Fixed so that results never depend on the
#: worker count; sized so a three-axis chunk's live temporaries stay well
#: under a gigabyte.
DEFAULT_CHUNK_CELLS = 1 << 19

_SNAP_TOL = 1e-6


# ---------------------------------------------------------------------------
# breakpoint builders


def steps(lo: float, hi: float, delta: float) -> np.ndarray:
    """Breakpoints from lo to hi in steps of delta.

    When (hi - lo) / delta is an integer to within a relative 1e-6 the run
    is snapped to exactly that many equal cells ending on hi; otherwise the
    full-size cells are laid down and a final shorter cell closes the gap.
    """
    if not (hi > lo):
        raise DomainError(f"axis needs hi > lo, got [{lo}, {hi}]")
    if not delta > 0.0:
        raise DomainError(f"step must be positive, got {delta}")
    ratio = (hi - lo) / delta
    n = round(ratio)
    if n >= 1 and abs(ratio - n) < _SNAP_TOL:
        return np.linspace(lo, hi, n + 1)
    n = math.floor(ratio)
    bp = lo + delta * np.arange(n + 1, dtype=np.float64)
    return np.append(bp, hi)


def equispaced(lo: float, hi: float, n: int) -> np.ndarray:
    """Breakpoints splitting [lo, hi] into n equal cells."""
    if not (hi > lo):
        raise DomainError(f"axis needs hi > lo, got [{lo}, {hi}]")
    if n < 1:
        raise DomainError(f"cell count must be at least 1, got {n}")
    return np.linspace(lo, hi, n + 1)


def chain(*parts: np.ndarray) -> np.ndarray:
    """Concatenate breakpoint runs whose endpoints meet exactly."""
    if not parts:
        raise DomainError("chain needs at least one breakpoint run")
    out = [np.asarray(parts[0], dtype=np.float64)]
    for p in parts[1:]:
        p = np.asarray(p, dtype=np.float64)
        if p[0] != out[-1][-1]:
            raise DomainError(
                f"breakpoint runs do not meet: {out[-1][-1]} then {p[0]}"
            )
        out.append(p[1:])
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Ordered axes of a cell grid: (name, ascending breakpoints) pairs."""

    axes: tuple[tuple[str, np.ndarray], ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.axes)

    @property
    def cells_shape(self) -> tuple[int, ...]:
        return tuple(len(bp) - 1 for _, bp in self.axes)

    @property
    def n_cells(self) -> int:
        out = 1
        for n in self.cells_shape:
            out *= n
        return out

    def cell(self, idx: Sequence[int]) -> tuple[Interval, ...]:
        """The closed box at a cell index."""
        return tuple(
            Interval(bp[i], bp[i + 1]) for (_, bp), i in zip(self.axes, idx)
        )

    def digest(self) -> str:
        h = hashlib.sha256()
        for name, bp in self.axes:
            _hash_axis(h, name, bp)
        return h.hexdigest()


def _hash_axis(h, name: str, bp: np.ndarray) -> None:
    h.update(name.encode())
    h.update(b"\x00")
    h.update(np.ascontiguousarray(bp, dtype=np.float64).tobytes())
    h.update(b"\x00")


def build_grid(*axes: tuple[str, Sequence[float]]) -> GridSpec:
    """Validate and assemble a grid from (name, breakpoints) pairs."""
    if not axes:
        raise DomainError("a grid needs at least one axis")
    checked = []
    for name, bp in axes:
        arr = np.asarray(bp, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 2:
            raise DomainError(f"axis {name!r} needs at least two breakpoints")
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"axis {name!r} has non-finite breakpoints")
        if not np.all(arr[1:] > arr[:-1]):
            raise DomainError(f"axis {name!r} breakpoints must strictly ascend")
        checked.append((str(name), arr))
    return GridSpec(axes=tuple(checked))


# ---------------------------------------------------------------------------
# reports


@dataclass
class CampaignReport:
    """Outcome of one positivity campaign.

    ``min_lower`` is the least certified lower bound over all decided cells
    (every cell, unless refinement left some undecided); it is positive
    exactly when ``failing`` is empty.  ``undecided`` lists cells that
    refinement could neither certify nor disprove; they keep the status at
    "undecided" without counting as failures.  ``timing`` holds the only
    fields that vary between identical runs.
    """

    campaign: str
    status: str
    cell_count: int
    min_lower: float | None
    reference: float | None
    failing: list[dict]
    undecided: list[dict]
    notes: list[str]
    grid_hash: str
    timing: dict

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(asdict(self), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> CampaignReport:
        data = json.loads(text)
        return cls(**{f: data[f] for f in cls.__dataclass_fields__})


def _timing(started: str, t0: float) -> dict:
    return {"started": started, "wall_seconds": time.perf_counter() - t0}


def _status(failing: list, undecided: list) -> str:
    if failing:
        return "fail"
    if undecided:
        return "undecided"
    return "pass"


def _cell_record(
    names: Sequence[str],
    bounds: Sequence[tuple[float, float]],
    idx: Sequence[int] | None,
    lower: float,
    upper: float,
) -> dict:
    rec: dict = {"cell": list(idx) if idx is not None else None}
    for name, (lo, hi) in zip(names, bounds):
        rec[name] = [float(lo), float(hi)]
    rec["lower"] = float(lower)
    rec["upper"] = float(upper)
    return rec


# ---------------------------------------------------------------------------
# chunked evaluation


class _ChunkStats(NamedTuple):
    min_all: float
    min_pass: float
    n_fail: int
    records: list


def _block_args(bps: Sequence[np.ndarray], row_lo: int, row_hi: int) -> list:
    args = []
    k = len(bps)
    for axis, bp in enumerate(bps):
        seg = bp[row_lo : row_hi + 1] if axis == 0 else bp
        arr = IntervalArray.from_breakpoints(seg)
        shape = [1] * k
        shape[axis] = arr.size
        args.append(arr.reshape(tuple(shape)))
    return args


def _eval_block(fn, bps, row_lo, row_hi):
    out = fn(*_block_args(bps, row_lo, row_hi))
    shape = (row_hi - row_lo,) + tuple(len(bp) - 1 for bp in bps[1:])
    lo = np.broadcast_to(np.asarray(out.lo, dtype=np.float64), shape)
    hi = np.broadcast_to(np.asarray(out.hi, dtype=np.float64), shape)
    return lo, hi


def _block_stats(lo, hi, names, bps, row_lo, cap) -> _ChunkStats:
    mask = lo <= 0.0
    min_all = float(lo.min())
    ok = ~mask
    min_pass = float(lo[ok].min()) if ok.any() else math.inf
    n_fail = int(mask.sum())
    records = []
    if n_fail:
        for loc in np.argwhere(mask)[:cap]:
            gidx = (int(loc[0]) + row_lo, *(int(v) for v in loc[1:]))
            bounds = [(bp[i], bp[i + 1]) for bp, i in zip(bps, gidx)]
            records.append(
                _cell_record(names, bounds, gidx, lo[tuple(loc)], hi[tuple(loc)])
            )
    return _ChunkStats(min_all, min_pass, n_fail, records)


def _find_domain_cell(fn, bps, ranges):
    """Bisect a failing block down to one offending cell.

    Returns (ranges, exc) for the smallest sub-block that still raises, or
    None if the block evaluates cleanly (then the caller's error was an
    artifact of a larger evaluation and is re-raised as-is).
    """
    try:
        sub = [bp[a : b + 1] for bp, (a, b) in zip(bps, ranges)]
        _eval_block(fn, sub, 0, len(sub[0]) - 1)
        return None
    except DomainError as exc:
        if all(b - a == 1 for a, b in ranges):
            return ranges, exc
        ax = max(range(len(ranges)), key=lambda i: ranges[i][1] - ranges[i][0])
        a, b = ranges[ax]
        mid = (a + b) // 2
        for half in ((a, mid), (mid, b)):
            rr = list(ranges)
            rr[ax] = half
            found = _find_domain_cell(fn, bps, tuple(rr))
            if found is not None:
                return found
        return ranges, exc


def _located_domain_error(name, fn, names, bps, row_lo, row_hi, exc) -> DomainError:
    ranges = [(row_lo, row_hi)] + [(0, len(bp) - 1) for bp in bps[1:]]
    found = _find_domain_cell(fn, bps, tuple(ranges))
    if found is None:
        return DomainError(f"{name}: {exc}")
    ranges, inner = found
    idx = tuple(a for a, _ in ranges)
    box = ", ".join(
        f"{nm}=[{bp[a]}, {bp[a + 1]}]" for nm, bp, (a, _) in zip(names, bps, ranges)
    )
    return DomainError(f"{name}: cell {idx} ({box}): {inner}")


def _chunk_task(task) -> _ChunkStats:
    name, fn, names, bps, row_lo, row_hi, cap = task
    try:
        lo, hi = _eval_block(fn, bps, row_lo, row_hi)
    except DomainError as exc:
        raise _located_domain_error(name, fn, names, bps, row_lo, row_hi, exc) from exc
    return _block_stats(lo, hi, names, bps, row_lo, cap)


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("APSIDAL_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"APSIDAL_WORKERS is not an integer: {env!r}")
    return 1


def _csv_header(names: Sequence[str]) -> str:
    cols = ["index"]
    for name in names:
        cols += [f"{name}_lo", f"{name}_hi"]
    cols += ["lower", "upper"]
    return ",".join(cols)


def _csv_rows(out, names, bps, shape, row_lo, lo, hi):
    for loc in np.ndindex(lo.shape):
        gidx = (loc[0] + row_lo, *loc[1:])
        flat = int(np.ravel_multi_index(gidx, shape))
        vals = [str(flat)]
        for bp, i in zip(bps, gidx):
            vals += [repr(float(bp[i])), repr(float(bp[i + 1]))]
        vals += [repr(float(lo[loc])), repr(float(hi[loc]))]
        out.write(",".join(vals) + "\n")


# ---------------------------------------------------------------------------
# sweep and refinement


def sweep(
    fn: Callable,
    grid: GridSpec,
    *,
    name: str = "sweep",
    reference: float | None = None,
    notes: Sequence[str] = (),
    workers: int | None = None,
    chunk_cells: int = DEFAULT_CHUNK_CELLS,
    max_recorded: int = 200,
    refine_depth: int = 0,
    csv_path: str | os.PathLike | None = None,
) -> CampaignReport:
    """Evaluate fn on every cell of a product grid and report positivity.

    fn receives one IntervalArray per axis, mutually broadcastable, and must
    return an enclosure of its values over each cell.  Cells whose lower
    endpoint is <= 0 are failures; with refine_depth > 0 each recorded
    failure is re-examined by adaptive bisection before being counted.
    csv_path streams one row per cell (forcing a serial run).
    """
    t0 = time.perf_counter()
    started = datetime.now(timezone.utc).isoformat()
    names = list(grid.names)
    bps = [bp for _, bp in grid.axes]
    shape = grid.cells_shape
    per_row = 1
    for n in shape[1:]:
        per_row *= n
    rows_per = max(1, chunk_cells // max(1, per_row))
    spans = [(r, min(r + rows_per, shape[0])) for r in range(0, shape[0], rows_per)]
    tasks = [
        (name, fn, tuple(names), tuple(bps), a, b, max_recorded) for a, b in spans
    ]

    if csv_path is not None:
        results = []
        with open(csv_path, "w") as out:
            out.write(_csv_header(names) + "\n")
            for _, _, _, _, a, b, cap in tasks:
                try:
                    lo, hi = _eval_block(fn, bps, a, b)
                except DomainError as exc:
                    raise _located_domain_error(
                        name, fn, names, bps, a, b, exc
                    ) from exc
                _csv_rows(out, names, bps, shape, a, lo, hi)
                results.append(_block_stats(lo, hi, names, bps, a, cap))
    else:
        w = _resolve_workers(workers)
        if w == 1 or len(tasks) == 1:
            results = [_chunk_task(t) for t in tasks]
        else:
            with get_context("fork").Pool(w) as pool:
                results = pool.map(_chunk_task, tasks)

    min_all = math.inf
    min_pass = math.inf
    failing: list[dict] = []
    total_fail = 0
    for res in results:
        min_all = min(min_all, res.min_all)
        min_pass = min(min_pass, res.min_pass)
        total_fail += res.n_fail
        if len(failing) < max_recorded:
            failing.extend(res.records[: max_recorded - len(failing)])

    notes = list(notes)
    if total_fail > len(failing):
        notes.append(
            f"{total_fail} failing cells, first {len(failing)} recorded"
        )

    undecided: list[dict] = []
    min_lower = min_all
    if refine_depth > 0 and failing and total_fail == len(failing):
        failing, undecided, refined_min, note = _refine_failures(
            fn, names, failing, refine_depth
        )
        notes.append(note)
        if not failing and not undecided:
            min_lower = min(min_pass, refined_min)
        elif not failing:
            min_lower = min(min_pass, refined_min)
    elif refine_depth > 0 and total_fail > len(failing):
        notes.append("refinement skipped: failures exceed the record cap")

    return CampaignReport(
        campaign=name,
        status=_status(failing, undecided),
        cell_count=grid.n_cells,
        min_lower=min_lower,
        reference=reference,
        failing=failing,
        undecided=undecided,
        notes=notes,
        grid_hash=grid.digest(),
        timing=_timing(started, t0),
    )


def _refine_failures(fn, names, failing, depth):
    """Re-examine recorded failures by bisection; returns the survivors."""
    still: list[dict] = []
    undecided: list[dict] = []
    refined_min = math.inf
    certified = 0
    for rec in failing:
        box = tuple((nm, Interval(*rec[nm])) for nm in names)
        rep = adaptive_refine(fn, box, depth, name="refine")
        if rep.min_lower is not None:
            refined_min = min(refined_min, rep.min_lower)
        still.extend(rep.failing)
        undecided.extend(rep.undecided)
        if rep.status == "pass":
            certified += 1
    note = (
        f"refined {len(failing)} failing cells to depth {depth}: "
        f"{certified} certified, {len(undecided)} undecided sub-cells, "
        f"{len(still)} disproved"
    )
    return still, undecided, refined_min, note


def adaptive_refine(
    fn: Callable,
    box: Sequence[tuple[str, Interval]],
    max_depth: int,
    *,
    name: str = "refine",
) -> CampaignReport:
    """Bisect a box until every piece is decided or the depth runs out.

    A piece whose enclosure has a positive lower endpoint is certified; one
    with a negative upper endpoint is a disproof and is recorded as failing;
    anything still straddling zero at depth zero is undecided, which is not
    a failure.  Bisection always splits the widest axis at its midpoint.
    ``min_lower`` covers decided pieces only.
    """
    t0 = time.perf_counter()
    started = datetime.now(timezone.utc).isoformat()
    names = [nm for nm, _ in box]
    root = [iv if isinstance(iv, Interval) else Interval(*iv) for _, iv in box]

    certified_min = math.inf
    failing: list[dict] = []
    undecided: list[dict] = []
    leaves = 0

    def visit(ivs: list[Interval], depth: int) -> None:
        nonlocal certified_min, leaves
        out = fn(*ivs)
        lo = float(np.min(out.lo)) if not isinstance(out, Interval) else out.lo
        hi = float(np.max(out.hi)) if not isinstance(out, Interval) else out.hi
        bounds = [(iv.lo, iv.hi) for iv in ivs]
        if lo > 0.0:
            certified_min = min(certified_min, lo)
            leaves += 1
            return
        if hi < 0.0:
            failing.append(_cell_record(names, bounds, None, lo, hi))
            leaves += 1
            return
        widths = [iv.hi - iv.lo for iv in ivs]
        ax = widths.index(max(widths))
        mid = 0.5 * (ivs[ax].lo + ivs[ax].hi)
        splittable = ivs[ax].lo < mid < ivs[ax].hi
        if depth <= 0 or not splittable:
            undecided.append(_cell_record(names, bounds, None, lo, hi))
            leaves += 1
            return
        left = list(ivs)
        left[ax] = Interval(ivs[ax].lo, mid)
        right = list(ivs)
        right[ax] = Interval(mid, ivs[ax].hi)
        visit(left, depth - 1)
        visit(right, depth - 1)

    visit(root, max_depth)

    decided = [certified_min] + [rec["lower"] for rec in failing]
    finite = [v for v in decided if v != math.inf]
    min_lower = min(finite) if finite else None
    h = hashlib.sha256()
    for nm, iv in zip(names, root):
        _hash_axis(h, nm, np.array([iv.lo, iv.hi]))
    return CampaignReport(
        campaign=name,
        status=_status(failing, undecided),
        cell_count=leaves,
        min_lower=min_lower,
        reference=None,
        failing=failing,
        undecided=undecided,
        notes=[],
        grid_hash=h.hexdigest(),
        timing=_timing(started, t0),
    )


# ---------------------------------------------------------------------------
# the named campaigns

CAMPAIGNS = (
    "N0",
    "N0_tilde",
    "N1",
    "N1_tilde",
    "N_mid",
    "M_f",
    "Z_f",
    "I_tilde_f",
)

_REFERENCES = {
    "N0": 0.0056,
    "N0_tilde": 0.2721,
    "N1": 0.01246,
    "N1_tilde": 1.7509,
    "N_mid": 0.0108,
    "M_f": 0.1223,
    "Z_f": 0.01987,
    "I_tilde_f": 0.09260,
}

_BASE_NOTE = (
    "reference is a regression guide; the pass criterion is strict "
    "positivity of every cell"
)

# Z_f's coarse enclosures straddle zero on a thin band of cells (small
# alpha, q near 0.9) that bisection settles quickly; the other campaigns
# certify at depth 0.  The record cap must exceed the straddling-cell
# count or the refinement pass cannot prove it saw every failure.
_DEFAULT_REFINE = {"Z_f": 5}
_MAX_RECORDED = {"Z_f": 20000}


def _eval_n0_plain(alpha, q, consts):
    return funcs.N0_pair(alpha, q, consts, "plain")


def _eval_n0_tilde(alpha, q, consts):
    return funcs.N0_pair(alpha, q, consts, "tilde")


def _eval_n1_plain(alpha, q, consts):
    return funcs.N1_pair(alpha, q, consts, "plain")


def _eval_n1_tilde(alpha, q, consts):
    return funcs.N1_pair(alpha, q, consts, "tilde")


def _eval_m_f(alpha, s, q, consts):
    return funcs.M_f(alpha, s, q, consts)


def _coarse_n(n: int, k: int) -> int:
    return max(1, n // k)


def _alpha_conditional_campaign(
    name: str,
    fn: Callable,
    alpha_bp: np.ndarray,
    q_bp_for_cell: Callable[[Interval], np.ndarray],
    *,
    refine_depth: int = 0,
    max_recorded: int = 200,
    csv_path: str | os.PathLike | None = None,
) -> CampaignReport:
    """Sweep a 2-axis campaign whose q-breakpoints depend on the alpha cell."""
    t0 = time.perf_counter()
    started = datetime.now(timezone.utc).isoformat()
    names = ["alpha", "q"]
    h = hashlib.sha256()
    _hash_axis(h, "alpha", alpha_bp)

    min_all = math.inf
    min_pass = math.inf
    failing: list[dict] = []
    total_fail = 0
    cells = 0
    out = None
    if csv_path is not None:
        out = open(csv_path, "w")
        out.write(_csv_header(names) + "\n")
    try:
        for i in range(len(alpha_bp) - 1):
            al, ah = float(alpha_bp[i]), float(alpha_bp[i + 1])
            q_bp = q_bp_for_cell(Interval(al, ah))
            _hash_axis(h, f"q[{i}]", q_bp)
            nq = len(q_bp) - 1
            a_arr = IntervalArray(np.full(nq, al), np.full(nq, ah))
            q_arr = IntervalArray.from_breakpoints(q_bp)
            try:
                res = fn(a_arr, q_arr)
            except DomainError as exc:
                raise _located_domain_error(
                    name, fn, names, [np.array([al, ah]), q_bp], 0, 1, exc
                ) from exc
            lo = np.asarray(res.lo, dtype=np.float64)
            hi = np.asarray(res.hi, dtype=np.float64)
            if out is not None:
                for j in range(nq):
                    out.write(
                        ",".join(
                            [
                                str(cells + j),
                                repr(al),
                                repr(ah),
                                repr(float(q_bp[j])),
                                repr(float(q_bp[j + 1])),
                                repr(float(lo[j])),
                                repr(float(hi[j])),
                            ]
                        )
                        + "\n"
                    )
            mask = lo <= 0.0
            min_all = min(min_all, float(lo.min()))
            if (~mask).any():
                min_pass = min(min_pass, float(lo[~mask].min()))
            total_fail += int(mask.sum())
            for j in np.flatnonzero(mask):
                if len(failing) >= max_recorded:
                    break
                bounds = [(al, ah), (q_bp[j], q_bp[j + 1])]
                failing.append(
                    _cell_record(names, bounds, (i, int(j)), lo[j], hi[j])
                )
            cells += nq
    finally:
        if out is not None:
            out.close()

    notes = [_BASE_NOTE]
    if total_fail > len(failing):
        notes.append(f"{total_fail} failing cells, first {len(failing)} recorded")
    undecided: list[dict] = []
    min_lower = min_all
    if refine_depth > 0 and failing and total_fail == len(failing):
        failing, undecided, refined_min, note = _refine_failures(
            fn, names, failing, refine_depth
        )
        notes.append(note)
        if not failing:
            min_lower = min(min_pass, refined_min)

    return CampaignReport(
        campaign=name,
        status=_status(failing, undecided),
        cell_count=cells,
        min_lower=min_lower,
        reference=_REFERENCES[name],
        failing=failing,
        undecided=undecided,
        notes=notes,
        grid_hash=h.hexdigest(),
        timing=_timing(started, t0),
    )


def run_campaign(
    name: str,
    consts: BoundConstants | None = None,
    *,
    coarsen: int = 1,
    refine_depth: int | None = None,
    workers: int | None = None,
    chunk_cells: int = DEFAULT_CHUNK_CELLS,
    csv_path: str | os.PathLike | None = None,
) -> CampaignReport:
    """Run one named campaign on its standard grid.

    coarsen multiplies every step (and divides every equispaced cell count)
    by an integer factor, for quick low-resolution passes; combined with
    refine_depth the coarse run can still certify the region.

    refine_depth=None picks the campaign's own default: 5 for Z_f, whose
    coarse enclosures straddle zero on a band of cells near q = 0.9 at
    small alpha even though the function is positive there, and 0 for the
    rest.  Pass an explicit depth (0 included) to override.
    """
    if consts is None:
        consts = BoundConstants()
    if name not in CAMPAIGNS:
        raise DomainError(
            f"unknown campaign {name!r}; expected one of {', '.join(CAMPAIGNS)}"
        )
    if refine_depth is None:
        refine_depth = _DEFAULT_REFINE.get(name, 0)
    k = max(1, int(coarsen))

    if name == "N0":
        alpha_bp = chain(
            steps(0.0, 0.04, 0.002 * k),
            steps(0.04, consts.alpha_bar, 0.01 * k),
        )
        return _alpha_conditional_campaign(
            "N0",
            partial(_eval_n0_plain, consts=consts),
            alpha_bp,
            lambda a: equispaced(0.9, consts.q_max(a).hi, _coarse_n(50, k)),
            refine_depth=refine_depth,
            csv_path=csv_path,
        )
    if name == "N0_tilde":
        alpha_bp = steps(0.0, consts.alpha_bar, 0.01 * k)
        return _alpha_conditional_campaign(
            "N0_tilde",
            partial(_eval_n0_tilde, consts=consts),
            alpha_bp,
            lambda a: equispaced(consts.q_max(a).lo, 1.0, _coarse_n(5, k)),
            refine_depth=refine_depth,
            csv_path=csv_path,
        )

    if name == "N1":
        grid = build_grid(
            (
                "alpha",
                chain(
                    steps(consts.alpha_hat, 0.9, 0.002 * k),
                    steps(0.9, 1.0, 0.01 * k),
                ),
            ),
            ("q", equispaced(0.9, consts.q_hat_interval().hi, _coarse_n(30, k))),
        )
        fn: Callable = partial(_eval_n1_plain, consts=consts)
    elif name == "N1_tilde":
        grid = build_grid(
            ("alpha", steps(consts.alpha_hat, 1.0, 0.04 * k)),
            ("q", equispaced(consts.q_hat_interval().lo, 1.0, _coarse_n(5, k))),
        )
        fn = partial(_eval_n1_tilde, consts=consts)
    elif name == "N_mid":
        grid = build_grid(
            ("alpha", steps(consts.alpha_bar, consts.alpha_hat, 0.001 * k)),
            (
                "q",
                chain(
                    steps(0.9, 0.95, 0.0015 * k),
                    steps(0.95, 1.0, 0.003 * k),
                ),
            ),
        )
        fn = funcs.N_tilde
    elif name == "M_f":
        grid = build_grid(
            ("alpha", steps(0.0, 1.0, 0.025 * k)),
            ("s", steps(0.0, 0.5, 0.01 * k)),
            ("q", steps(0.0, consts.q_bar, 0.01 * k)),
        )
        fn = partial(_eval_m_f, consts=consts)
    elif name == "Z_f":
        grid = build_grid(
            ("alpha", steps(0.0, consts.alpha_0, 0.002 * k)),
            ("s", steps(0.0, 0.5, 0.002 * k)),
            ("q", steps(consts.q_bar, 0.9, 0.001 * k)),
        )
        fn = funcs.Z_f
    else:
        grid = build_grid(
            ("alpha", steps(consts.alpha_0, 1.0, 0.005 * k)),
            ("s", steps(0.0, 0.5, 0.005 * k)),
            ("q", steps(consts.q_bar, 0.9, 0.005 * k)),
        )
        fn = funcs.I_tilde_f

    return sweep(
        fn,
        grid,
        name=name,
        reference=_REFERENCES[name],
        notes=[_BASE_NOTE],
        workers=workers,
        chunk_cells=chunk_cells,
        refine_depth=refine_depth,
        max_recorded=_MAX_RECORDED.get(name, 200),
        csv_path=csv_path,
    )


# ---------------------------------------------------------------------------
# configuration


def parse_config(path: str | os.PathLike) -> dict:
    """Read a flat key = value file; '#' starts a comment.

    Values are coerced to int, then float, else kept as strings.  Known
    keys: workers, refine_depth, coarsen, out_dir, coarsen.<campaign>, and
    consts.<field> overriding BoundConstants.
    """
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno} is not key = value: {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = _coerce(val.strip())
    return out


def _coerce(val: str):
    for cast in (int, float):
        try:
            return cast(val)
        except ValueError:
            pass
    return val


def consts_from_config(cfg: dict) -> BoundConstants:
    """BoundConstants with any consts.<field> overrides applied."""
    fields = {}
    for key, val in cfg.items():
        if key.startswith("consts."):
            fname = key[len("consts.") :]
            if fname not in BoundConstants.__dataclass_fields__:
                raise DomainError(f"unknown constant {fname!r}")
            fields[fname] = float(val)
    return BoundConstants(**fields)
