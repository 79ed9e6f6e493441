# isotower/cli.py
"""
Command line for isotower.

    isotower verify --suite tower --d0 3 --d1 4 --trials 200 --seed 7 --out report.json
    isotower verify --suite all --out report.json      # default d0/d1 grid
    isotower koszul --group 2x3 --v0 "1,0" --v1 "0,0;1,0"
    isotower degree --map r-lift --d0 3

Exit status: 0 when every check passes, 1 when any fails, 2 on bad usage.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from config.settings import settings
from isotower.errors import InvalidInput, IsotowerError, TooLarge, UsageError
from isotower.koszul import tower_koszul
from isotower.ktheory import GroupSpec, Representation, is_subrep
from isotower.report import DEFAULT_D1, GRID_D0, Report, SuiteConfig
from isotower.suites import ALL, DEGREE_BUILTINS, SUITES, builtin_degree, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _parse_tol(items: Optional[List[str]]) -> Dict[str, float]:
    out: Dict[str, float] = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--tol expects name=value, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError:
            raise UsageError(f"--tol {name}: {value!r} is not a number")
    return out


def _parse_levels(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--k expects comma-separated levels, got {text!r}")


def _load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {path}: {e}")
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


def build_config(args: argparse.Namespace) -> SuiteConfig:
    """Config file first, then command-line flags on top."""
    fields = _load_config_file(args.config)
    if isinstance(fields.get("group"), str):
        fields["group"] = list(GroupSpec.parse(fields["group"]).orders)
    if "k" in fields:
        fields["k_range"] = fields.pop("k")
    fields.pop("suite", None)
    fields.pop("out", None)

    flags = {
        "d0": args.d0,
        "d1": args.d1,
        "trials": args.trials,
        "seed": args.seed,
        "k_range": _parse_levels(args.k),
        "group": list(GroupSpec.parse(args.group).orders) if args.group else None,
    }
    fields.update({name: value for name, value in flags.items() if value is not None})
    tol = dict(fields.get("tol") or {})
    tol.update(_parse_tol(args.tol))
    fields["tol"] = tol
    if "d1" not in fields and "d0" in fields:
        fields["d1"] = max(fields["d0"], DEFAULT_D1)
    try:
        return SuiteConfig(**fields)
    except ValidationError as e:
        raise UsageError(f"invalid configuration: {e.errors()[0]['msg']}")


def _write(path: str, text: str) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    logger.info(f"Wrote {out}")


def cmd_verify(args: argparse.Namespace) -> int:
    suite = args.suite or _load_config_file(args.config).get("suite") or ALL
    cfg = build_config(args)
    report = run_suite(suite, cfg)
    print(f"{suite}: {report.summary.pass_} pass, {report.summary.fail} fail, {report.summary.skip} skip")
    for record in report.failed:
        print(f"  ❌ {record.id}: {json.dumps(record.witness, default=str)}")
    if args.out:
        _write(args.out, report.to_json())
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_koszul(group: GroupSpec, v0: Representation, v1: Representation) -> Report:
    """Print the tower sequence, its Koszul differentials, d² and the subrep verdict."""
    complex_, report = tower_koszul(v0, v1)
    print(f"G = {' x '.join(f'Z/{n}' for n in group.orders)}, V0 = {v0.label()}, V1 = {v1.label()}")
    for j, x in enumerate(complex_.sequence):
        print(f"  x_{j} = residue(T^{j}) = {x}")
    for degree in range(1, complex_.rank + 1):
        print(f"  d_{degree}:")
        for row in complex_.differential(degree):
            print("    [" + ", ".join(str(entry) for entry in row) + "]")
    print(f"  d² = 0: {complex_.d_squared_zero()}")
    print(f"  V0 ⊂ V1: {is_subrep(v0, v1)}   all x_j = 0: {all(x.is_zero() for x in complex_.sequence)}")
    report.environment["complex"] = complex_.to_dict()
    return report


def _run_koszul(args: argparse.Namespace) -> int:
    group = GroupSpec.parse(args.group)
    v0 = Representation.parse(group, args.v0)
    v1 = Representation.parse(group, args.v1)
    report = cmd_koszul(group, v0, v1)
    if args.out:
        _write(args.out, report.to_json())
    return EXIT_OK if report.ok else EXIT_FAILED


def _run_degree(args: argparse.Namespace) -> int:
    _, expected = DEGREE_BUILTINS.get(args.map, (None, None))
    degree = builtin_degree(args.map, args.d0)
    print(f"{args.map}: degree {degree} (expected {expected})")
    return EXIT_OK if degree == expected else EXIT_FAILED


def create_parser() -> argparse.ArgumentParser:
    """Create the CLI argument parser."""
    parser = argparse.ArgumentParser(
        prog="isotower",
        description="Verify the isometry tower constructions numerically and exactly",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument(
        "--log-level",
        default=settings.LOG_LEVEL,
        help=f"Logging level (default: {settings.LOG_LEVEL})",
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    verify = subparsers.add_parser("verify", help="Run a verification suite")
    verify.add_argument(
        "--suite",
        choices=sorted(SUITES) + [ALL],
        default=None,
        help="Suite to run (default: all)",
    )
    verify.add_argument("--d0", type=int, default=None, help=f"Dimension of V0 (default: sweep {GRID_D0[0]}..{GRID_D0[-1]})")
    verify.add_argument("--d1", type=int, default=None, help=f"Dimension of V1 (default: max(d0, {DEFAULT_D1}), or d0+0..2 when sweeping)")
    verify.add_argument("--trials", type=int, default=None, help=f"Trials per check (default: {settings.DEFAULT_TRIALS})")
    verify.add_argument("--seed", type=int, default=None, help=f"Master seed (default: {settings.DEFAULT_SEED})")
    verify.add_argument("--k", default=None, help="Comma-separated tower levels (default: 1..d0-1)")
    verify.add_argument("--group", default=None, help="Finite abelian group as cyclic orders, e.g. 2x3")
    verify.add_argument(
        "--tol",
        action="append",
        default=None,
        metavar="NAME=VALUE",
        help="Tolerance override (tau_gap, tol_eq, tol_sym); repeatable",
    )
    verify.add_argument("--config", default=None, help="JSON file mirroring these flags; flags win")
    verify.add_argument("--out", "-o", default=None, help="Write the report JSON here")

    koszul = subparsers.add_parser("koszul", help="Koszul complex of the tower residues for (G, V0, V1)")
    koszul.add_argument("--group", required=True, help="Cyclic orders, e.g. 2x3; 1 for the trivial group")
    koszul.add_argument("--v0", required=True, help="Characters of V0, e.g. '1,0;0,2'")
    koszul.add_argument("--v1", required=True, help="Characters of V1")
    koszul.add_argument("--out", "-o", default=None, help="Write the report JSON here")

    degree = subparsers.add_parser("degree", help="Degree of a builtin facial map")
    degree.add_argument("--map", required=True, choices=sorted(DEGREE_BUILTINS), help="Builtin map name")
    degree.add_argument("--d0", type=int, default=3, help="Dimension used to build the map (default: 3)")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI."""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    commands = {
        "verify": cmd_verify,
        "koszul": _run_koszul,
        "degree": _run_degree,
    }
    try:
        return commands[args.command](args)
    except (UsageError, InvalidInput, TooLarge) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IsotowerError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
