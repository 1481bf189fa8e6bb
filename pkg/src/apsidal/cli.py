"""Command-line front end for campaigns, sweeps, and reports.

Five subcommands: ``verify`` runs positivity campaigns and writes one JSON
report per campaign plus a combined summary, ``angle`` evaluates a single
apsidal angle, ``sweep`` tabulates angles against eccentricity and emits
the CSV, ``tail`` runs the exact-integer sign ladder and the interval
coefficient sweep, and ``report`` re-emits a stored campaign report in
another format.

Exit codes are the whole machine interface: 0 means every requested check
passed, 1 means a verification failure or undecided cells, 2 means the
invocation itself was wrong (usage or domain error).  Everything outside
a report's ``timing`` field is deterministic, so two identical invocations
produce byte-identical JSON apart from that one field.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import orbit, tail, verifier
from .funcs import BoundConstants
from .interval import DomainError
from .verifier import CampaignReport

__all__ = ["RunConfig", "emit_report", "main", "run"]

#: The interval coefficient sweep stops here regardless of --p-max: its
#: fixed 0.02-step grid certifies cleanly through p = 40, but enclosure
#: width grows with the polynomial degree and the margin is gone near
#: p = 80.  The integer ladder has no such limit.
COEFF_P_CAP = 40


@dataclass(frozen=True)
class RunConfig:
    """A verify run's inputs, resolved from flags, config file, and env.

    Flags beat config-file keys; a worker count left as None falls through
    to the APSIDAL_WORKERS environment variable inside the verifier.  The
    band constants are validated on construction so a bad override dies
    with exit 2 before any campaign starts.
    """

    command: str
    campaigns: tuple[str, ...]
    consts: BoundConstants
    out_dir: Path
    workers: int | None = None
    refine_depth: int | None = None
    coarsen: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        c = self.consts
        if not 0.0 < c.alpha_bar < c.alpha_hat < 1.0:
            raise DomainError(
                f"need 0 < alpha_bar < alpha_hat < 1, got {c.alpha_bar}, {c.alpha_hat}"
            )
        if not 0.0 < c.alpha_0 < 1.0:
            raise DomainError(f"alpha_0={c.alpha_0} outside (0, 1)")
        if not 0.0 < c.q_bar < 0.9:
            raise DomainError(f"q_bar={c.q_bar} outside (0, 0.9)")
        for name in self.campaigns:
            if name not in verifier.CAMPAIGNS:
                raise DomainError(
                    f"unknown campaign {name!r}; expected one of "
                    f"{', '.join(verifier.CAMPAIGNS)} or all"
                )
        for key, val in self.coarsen.items():
            if val < 1:
                raise DomainError(f"coarsen factor {val} for {key or 'all'} is < 1")

    def coarsen_for(self, name: str) -> int:
        return self.coarsen.get(name, self.coarsen.get("", 1))

    @classmethod
    def from_verify_args(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = verifier.parse_config(args.config) if args.config else {}
        consts = verifier.consts_from_config(cfg)
        coarsen: dict[str, int] = {}
        if "coarsen" in cfg:
            coarsen[""] = int(cfg["coarsen"])
        for key, val in cfg.items():
            if key.startswith("coarsen."):
                coarsen[key[len("coarsen.") :]] = int(val)
        if args.coarsen is not None:
            coarsen[""] = args.coarsen
        workers = args.workers if args.workers is not None else cfg.get("workers")
        refine = (
            args.refine_depth
            if args.refine_depth is not None
            else cfg.get("refine_depth")
        )
        selection = (
            tuple(verifier.CAMPAIGNS)
            if args.campaign == "all"
            else (args.campaign,)
        )
        return cls(
            command="verify",
            campaigns=selection,
            consts=consts,
            out_dir=Path(args.out if args.out else cfg.get("out_dir", "reports")),
            workers=int(workers) if workers is not None else None,
            refine_depth=int(refine) if refine is not None else None,
            coarsen=coarsen,
        )


# ---------------------------------------------------------------------------
# report emission


def _fmt(x: float | None) -> str:
    return "n/a" if x is None else f"{x:.8g}"


def emit_report(report: CampaignReport, format: str = "text") -> bytes:
    """Serialize one campaign report with stable field ordering.

    json is the storage format (CampaignReport round-trips through it);
    csv is a one-row summary under a header; text is the human screenful,
    with the published reference minimum printed next to the computed one.
    """
    if format == "json":
        return (report.to_json() + "\n").encode()
    if format == "csv":
        header = "campaign,status,cell_count,min_lower,reference,grid_hash\n"
        row = ",".join(
            [
                report.campaign,
                report.status,
                str(report.cell_count),
                _fmt(report.min_lower),
                _fmt(report.reference),
                report.grid_hash,
            ]
        )
        return (header + row + "\n").encode()
    if format == "text":
        lines = [f"campaign {report.campaign}: {report.status}"]
        detail = f"  cells {report.cell_count}  min lower bound {_fmt(report.min_lower)}"
        if report.reference is not None:
            detail += f"  reference {report.reference:g}"
            if report.min_lower is not None and report.reference:
                detail += f"  ratio {report.min_lower / report.reference:.4f}"
        lines.append(detail)
        if report.failing:
            first = report.failing[0]
            lines.append(f"  failing cells recorded: {len(report.failing)}, first {first}")
        if report.undecided:
            lines.append(f"  undecided cells: {len(report.undecided)}")
        for note in report.notes:
            lines.append(f"  note: {note}")
        wall = report.timing.get("wall_seconds")
        if wall is not None:
            lines.append(f"  wall {wall:.1f}s")
        return ("\n".join(lines) + "\n").encode()
    raise DomainError(f"unknown report format {format!r}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = RunConfig.from_verify_args(args)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict[str, dict] = {}
    all_pass = True
    for name in cfg.campaigns:
        report = verifier.run_campaign(
            name,
            cfg.consts,
            coarsen=cfg.coarsen_for(name),
            refine_depth=cfg.refine_depth,
            workers=cfg.workers,
            csv_path=(cfg.out_dir / f"{name}_cells.csv") if args.cells_csv else None,
        )
        (cfg.out_dir / f"{name}.json").write_bytes(emit_report(report, "json"))
        sys.stdout.write(emit_report(report, "text").decode())
        summary[name] = json.loads(report.to_json(indent=None))
        all_pass = all_pass and report.status == "pass"
    (cfg.out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(f"overall: {'pass' if all_pass else 'FAIL'}  (reports in {cfg.out_dir})")
    return 0 if all_pass else 1


def _cmd_angle(args: argparse.Namespace) -> int:
    q = args.q if args.q is not None else orbit.e_to_q(args.e)
    print(f"{orbit.apsidal_angle(args.alpha, q):.15g}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    alphas = [float(tok) for tok in args.alphas.split(",") if tok.strip()]
    if not alphas:
        raise DomainError("--alphas is empty")
    n = args.e_steps
    if n < 3:
        raise DomainError(f"--e-steps {n} is too few; need at least 3")
    if not 0.0 < args.e_min < args.e_max < 1.0:
        raise DomainError(
            f"need 0 < e-min < e-max < 1, got {args.e_min}, {args.e_max}"
        )
    e_grid = [
        args.e_min + (args.e_max - args.e_min) * i / (n - 1) for i in range(n)
    ]
    table = orbit.monotonicity_sweep(alphas, e_grid, workers=args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "sweep.csv"
    table.to_csv(csv_path)
    print(f"{len(table.rows)} rows ({len(alphas)} alphas x {n} e-points) -> {csv_path}")
    if table.violations:
        for alpha, e, diff in table.violations[:10]:
            print(f"  wrong-sign difference at alpha={alpha:g} e={e:g}: {diff:.3e}")
        more = len(table.violations) - 10
        if more > 0:
            print(f"  ... and {more} more")
        return 1
    print("all finite differences have the expected sign")
    return 0


def _cmd_tail(args: argparse.Namespace) -> int:
    code = 0
    try:
        ladder = tail.sign_ladder(args.p_max)
        print(f"sign ladder p 11..{args.p_max}: {len(ladder.records)} checks, pass")
    except tail.VerificationFailure as exc:
        print(f"sign ladder: {exc}")
        code = 1
    coeff_top = min(args.p_max, COEFF_P_CAP)
    try:
        coeff = tail.tail_coeff_check(p_range=range(11, coeff_top + 1))
        cells = sum(rec["cells"] for rec in coeff.records)
        worst = min(rec["min_lower"] for rec in coeff.records)
        print(
            f"coefficient sweep p 11..{coeff_top}: {cells} cells, "
            f"min lower bound {worst:.8g}, pass"
        )
    except tail.VerificationFailure as exc:
        print(f"coefficient sweep: {exc}")
        code = 1
    return code


def _cmd_report(args: argparse.Namespace) -> int:
    report = CampaignReport.from_json(Path(args.infile).read_text())
    sys.stdout.write(emit_report(report, args.format).decode())
    return 0 if report.status == "pass" else 1


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apsidal",
        description="Verified positivity campaigns and apsidal-angle tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run positivity campaigns")
    p_verify.add_argument(
        "--campaign",
        default="all",
        help="campaign name, or all (default)",
    )
    p_verify.add_argument("--config", help="key = value config file")
    p_verify.add_argument("--out", help="report directory (default reports)")
    p_verify.add_argument("--workers", type=int, help="worker processes")
    p_verify.add_argument(
        "--refine-depth", type=int, help="max bisection depth for failing cells"
    )
    p_verify.add_argument(
        "--coarsen", type=int, help="grid coarsening factor for quick passes"
    )
    p_verify.add_argument(
        "--cells-csv", action="store_true", help="also write per-cell CSVs"
    )
    p_verify.set_defaults(handler=_cmd_verify)

    p_angle = sub.add_parser("angle", help="one apsidal angle")
    p_angle.add_argument("--alpha", type=float, required=True)
    which = p_angle.add_mutually_exclusive_group(required=True)
    which.add_argument("--q", type=float, help="apsidal ratio parameter in (0,1)")
    which.add_argument("--e", type=float, help="eccentricity in (0,1)")
    p_angle.set_defaults(handler=_cmd_angle)

    p_sweep = sub.add_parser("sweep", help="angle-vs-eccentricity table")
    p_sweep.add_argument(
        "--alphas", required=True, help="comma-separated exponents"
    )
    p_sweep.add_argument("--e-steps", type=int, required=True)
    p_sweep.add_argument("--e-min", type=float, default=0.01)
    p_sweep.add_argument("--e-max", type=float, default=0.99)
    p_sweep.add_argument("--out", default="reports")
    p_sweep.add_argument("--workers", type=int)
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_tail = sub.add_parser("tail", help="series-tail sign checks")
    p_tail.add_argument(
        "--p-max",
        type=int,
        default=200,
        help=f"ladder upper index; the interval sweep caps at {COEFF_P_CAP}",
    )
    p_tail.set_defaults(handler=_cmd_tail)

    p_report = sub.add_parser("report", help="re-emit a stored report")
    p_report.add_argument("--in", dest="infile", required=True)
    p_report.add_argument(
        "--format", choices=("json", "csv", "text"), default="text"
    )
    p_report.set_defaults(handler=_cmd_report)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv and dispatch; returns the exit code, never raises."""
    tokens = list(sys.argv[1:] if argv is None else argv)
    for i, tok in enumerate(tokens[:-1]):
        # argparse reads a value starting with a dash as a flag, which a
        # negative exponent list always does; fuse it onto the option.
        if tok == "--alphas":
            tokens[i : i + 2] = [f"--alphas={tokens[i + 1]}"]
            break
    try:
        args = _build_parser().parse_args(tokens)
    except SystemExit as exc:
        # argparse has already printed usage (errors) or help.
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.handler(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (orbit.NoBoundedOrbit, orbit.DegenerateOrbit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
