#!/usr/bin/env python3
"""
Fockbench - Main CLI

Provides commands for:
- Fock norms and single operator values
- Criterion fields as CSV
- Boundedness/compactness verdicts, one config or a whole corpus
- Lattice and Littlewood-Paley sanity reports
"""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .config import (
    RunConfig,
    config_from_dict,
    configure_logging,
    default_out_dir,
    load_config,
    load_environment,
)
from .criteria import CRITERION_FIELDS, criterion_field
from .defaults import B_GRID_ANGLES, B_GRID_RADII, B_GRID_RADIUS, LATTICE_PROBES, NORM_TOL
from .errors import CertificateError, ConfigError, ConvergenceError, DomainError, FockbenchError, SymbolSyntaxError
from .fock import fock_function, fock_norm, lp_family, lp_window
from .lattice import check_lattice, make_lattice
from .operators import OperatorKind, SymbolPair, apply
from .records import write_field_csv
from .report import format_table, format_verdict, run_suite_file, run_verdict

logger = logging.getLogger(__name__)


def banner(title: str) -> None:
    print(f"\n{'='*80}")
    print(title)
    print(f"{'='*80}\n")


def parse_grid(text: str) -> tuple:
    """'RxA' -> (radii, angles)."""
    try:
        radii, angles = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RxA, e.g. 12x16, got {text!r}") from None
    if radii < 1 or angles < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return radii, angles


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a complex number like 1+2j, got {text!r}") from None


def parse_exponent_flag(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'inf', got {text!r}") from None


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    """--config file, or a config assembled from --op/--g/--psi/--alpha/--p/--q; flags override."""
    if args.config:
        config = load_config(Path(args.config))
    else:
        if not args.op or not args.g:
            raise ConfigError("either --config or both --op and --g are required", "op")
        data: Dict[str, Any] = {"op": args.op, "g": args.g, "psi": args.psi, "alpha": args.alpha}
        data["p"] = "inf" if math.isinf(args.p) else args.p
        data["q"] = "inf" if math.isinf(args.q) else args.q
        config = config_from_dict(data)
    radii, angles = args.grid if args.grid else (None, None)
    return config.with_overrides(
        tol=args.tol, radii=radii, angles=angles, W=args.radius, emit_field=getattr(args, "field", None)
    ).validate()


def _out_dir(args: argparse.Namespace, config: Optional[RunConfig] = None) -> Path:
    if args.out:
        return Path(args.out)
    if config is not None and config.out:
        return Path(config.out)
    return Path(default_out_dir())


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_norm(args: argparse.Namespace) -> int:
    banner(f"FOCK NORM: {args.expr}")
    f = fock_function(args.expr, args.alpha)
    result = fock_norm(f, args.p, args.alpha, args.tol or NORM_TOL)
    print(f"alpha = {args.alpha}   p = {args.p}")
    if result.diverges:
        print(f"⚠️  Norm diverges: {result.detail}")
        return 0
    print(f"||f|| = {result.value:.12g}   (error <= {result.error:.2g}, {result.status})")
    return 0


def cmd_apply(args: argparse.Namespace) -> int:
    op = OperatorKind(args.op)
    pair = SymbolPair.from_text(args.g, args.psi)
    f = fock_function(args.f, args.alpha)
    banner(f"{op.value} f   g = {args.g}   psi = {args.psi}   f = {args.f}")
    for z in args.z:
        value = apply(op, pair, f, z)
        print(f"z = {z}:   (T f)(z) = {value.real:.15g} {value.imag:+.15g}j")
    return 0


def cmd_criterion(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    radii, angles = args.grid if args.grid else (B_GRID_RADII, B_GRID_ANGLES)
    radius = args.radius or B_GRID_RADIUS
    banner(f"CRITERION FIELD {args.which}: g = {config.g}   psi = {config.psi}")
    samples = criterion_field(args.which, config.pair(), config.params(), radius, radii, angles)
    out_dir = _out_dir(args, config)
    path = write_field_csv(samples.rows(), out_dir / f"{config.run_id or 'field'}_{args.which}.csv")
    print(f"📈 {len(samples.values)} samples, max = {float(samples.values.max()):.6g}")
    print(f"✅ Field written to {path}")
    return 0


def cmd_verdict(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    out_dir = _out_dir(args, config)
    banner(f"VERDICT: {config.op.value}")
    print("🔍 Classifying symbols and running the criteria...\n")
    record = run_verdict(config, out_dir, reuse=args.reuse)
    print(format_verdict(record))
    print(f"\n💾 Record {record['run_id']} stored in {out_dir}")
    return 0


def cmd_suite(args: argparse.Namespace) -> int:
    if not args.config:
        raise ConfigError("suite needs --config pointing at a corpus file", "config")
    out_dir = _out_dir(args)
    banner(f"SUITE: {args.config}")
    summary = run_suite_file(Path(args.config), out_dir)
    if not summary.rows:
        print("⚠️  Empty corpus")
    else:
        print(format_table(summary.rows, ("case_id", "op", "route", "bounded", "compact", "error")))
    if summary.summary_path:
        print(f"\n💾 Summary written to {summary.summary_path}")
    if summary.hard_failures:
        print(f"⚠️  {summary.hard_failures} case(s) failed numerically")
    return summary.exit_code


def cmd_lattice_check(args: argparse.Namespace) -> int:
    banner("LATTICE CHECK")
    rows: List[Dict[str, Any]] = []
    for r in args.r:
        lattice = make_lattice(r, args.radius or 10.0 * r)
        check = check_lattice(lattice, args.probes)
        rows.append(
            {
                "r": r,
                "nodes": len(lattice.points),
                "uncovered": check.uncovered,
                "min_distance": check.min_distance,
                "max_overlap": check.max_overlap,
                "ok": "yes" if check.ok else "NO",
            }
        )
    print(format_table(rows, ("r", "nodes", "uncovered", "min_distance", "max_overlap", "ok")))
    return 0


def cmd_lp_verify(args: argparse.Namespace) -> int:
    banner(f"LITTLEWOOD-PALEY WINDOW (alpha = {args.alpha})")
    family = lp_family(args.alpha)
    tol = args.tol or NORM_TOL
    for p in args.p:
        window = lp_window(family, p, args.alpha, tol)
        print(f"{'-'*80}")
        print(f"p = {p}:  c = {window.lower:.6g}   C = {window.upper:.6g}   C/c = {window.spread:.6g}")
        print(f"{'-'*80}")
        for label, ratio in window.ratios.items():
            print(f"  {label:<24} {ratio:.6g}")
    return 0


COMMANDS = {
    "norm": cmd_norm,
    "apply": cmd_apply,
    "criterion": cmd_criterion,
    "verdict": cmd_verdict,
    "suite": cmd_suite,
    "lattice-check": cmd_lattice_check,
    "lp-verify": cmd_lp_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Run config (JSON object) or corpus (JSON array)")
    common.add_argument("--out", help="Output directory (default: $FOCKBENCH_OUT or ./fockbench_runs)")
    common.add_argument("--tol", type=float, help="Relative tolerance")
    common.add_argument("--grid", type=parse_grid, help="Grid as RxA (radii x angles)")
    common.add_argument("--radius", type=float, help="Outer radius W of the grid")
    common.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level")

    symbols = argparse.ArgumentParser(add_help=False)
    symbols.add_argument("--op", choices=[k.value for k in OperatorKind], help="Operator")
    symbols.add_argument("--g", help="Symbol g, e.g. 'exp(0.25*z^2)'")
    symbols.add_argument("--psi", default="z", help="Symbol psi (default: z)")
    symbols.add_argument("--alpha", type=float, default=1.0, help="Weight alpha (default: 1)")
    symbols.add_argument("--p", type=parse_exponent_flag, default=2.0, help="Source exponent, or inf")
    symbols.add_argument("--q", type=parse_exponent_flag, default=2.0, help="Target exponent, or inf")

    parser = argparse.ArgumentParser(
        prog="fockbench",
        description="Numerical laboratory for Volterra companion operators on Fock spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="Fock norm of one entire function")
    p.add_argument("expr", help="Entire function of z")
    p.add_argument("--p", type=parse_exponent_flag, default=2.0)
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser("apply", parents=[common], help="Evaluate (T f)(z)")
    p.add_argument("--op", required=True, choices=[k.value for k in OperatorKind])
    p.add_argument("--g", required=True)
    p.add_argument("--psi", default="z")
    p.add_argument("--f", required=True, help="Function f to apply the operator to")
    p.add_argument("--z", type=parse_complex, nargs="+", required=True, help="Evaluation points")
    p.add_argument("--alpha", type=float, default=1.0)

    p = sub.add_parser("criterion", parents=[common, symbols], help="Emit one criterion field as CSV")
    p.add_argument("which", choices=CRITERION_FIELDS)

    p = sub.add_parser("verdict", parents=[common, symbols], help="Boundedness/compactness verdict")
    p.add_argument("--field", choices=CRITERION_FIELDS, help="Also emit this criterion field as CSV")
    p.add_argument("--reuse", action="store_true", help="Reuse a stored record with the same config hash")

    sub.add_parser("suite", parents=[common], help="Run every case of a corpus file")

    p = sub.add_parser("lattice-check", parents=[common], help="Covering/disjointness/N_max checks")
    p.add_argument("--r", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    p.add_argument("--probes", type=int, default=LATTICE_PROBES)

    p = sub.add_parser("lp-verify", parents=[common], help="Littlewood-Paley window report")
    p.add_argument("--p", type=parse_exponent_flag, nargs="+", default=[1.0, 2.0, math.inf])
    p.add_argument("--alpha", type=float, default=1.0)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch, and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging("DEBUG" if args.verbose else None)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, SymbolSyntaxError, DomainError) as exc:
        print(f"❌ Configuration error: {exc}", file=sys.stderr)
        return 1
    except (ConvergenceError, CertificateError, FockbenchError) as exc:
        print(f"❌ Numerical failure: {exc}", file=sys.stderr)
        return 2


def main():
    """Main CLI entry point."""
    load_environment()
    sys.exit(run())


if __name__ == "__main__":
    main()
