"""Command-line front end.

Subcommands::

    restartlab loss      loss curve (CSV or JSON), optionally with bound columns
    restartlab verify    sandwich / saw-tooth / nesting sweeps, JSON report
    restartlab optimize  optimal nu (additive) or rho (multiplicative)
    restartlab drive     run the strategy against a threshold oracle

Exit codes: 0 success, 1 failed check or cap exceeded, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import tempfile

from . import __version__, bounds
from .driver import DEFAULT_K_CAP, run_restarts, threshold_blackbox
from .errors import CapExceeded, RestartLabError
from .loss import loss, loss_curve
from .strategy import Kind, StrategySpec
from .sweep import minimize_asymptotic_upper, sandwich_sweep, sawtooth_sweep, star_times_nesting

SCHEMA_VERSION = 1
THREADS_ENV = "RESTARTLAB_THREADS"
DEBUG_ENV = "RESTARTLAB_DEBUG"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x) -> str:
    """Integers bare, floats in shortest round-trip form."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _real(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        x = math.nan
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a finite real number, got {text!r}")
    return x


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type", required=True, choices=[k.value for k in Kind], dest="kind")
    p.add_argument("--lambda0", required=True, type=_positive_int)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--nu", type=_positive_int)
    g.add_argument("--rho", type=_real)
    g.add_argument("--alpha", type=_real)


def _spec_from(args) -> StrategySpec:
    param = {"plus": args.nu, "star": args.rho, "times": args.rho, "pow": args.alpha}[args.kind]
    if param is None:
        wanted = {"plus": "--nu", "star": "--rho", "times": "--rho", "pow": "--alpha"}[args.kind]
        raise UsageError(f"--type {args.kind} requires {wanted}")
    return StrategySpec.make(args.kind, args.lambda0, param)


def _dump_json(obj: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, **obj}, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".restartlab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_loss(args) -> tuple[int, str]:
    spec = _spec_from(args)
    curve = loss_curve(spec, args.lo, args.hi, args.stride)
    columns = ["lambda_hat", "k_hat", "loss", "rel_loss"]
    cols = [curve.lambda_hat.tolist(), curve.k_hat.tolist(), curve.loss.tolist(), curve.relative_loss.tolist()]
    if args.bounds:
        columns += ["loss_lower", "loss_upper"]
        cols += [
            [float(x) for x in bounds.loss_lower(spec, curve.lambda_hat)],
            [float(x) for x in bounds.loss_upper(spec, curve.lambda_hat)],
        ]
    rows = list(zip(*cols))
    if args.format == "csv":
        lines = [",".join(columns)] + [",".join(fmt(v) for v in row) for row in rows]
        return 0, "\n".join(lines) + "\n"
    return 0, _dump_json(
        {
            "command": "loss",
            "spec": spec.to_dict(),
            "columns": columns,
            "rows": [dict(zip(columns, row)) for row in rows],
        }
    )


def cmd_verify(args) -> tuple[int, str]:
    spec = _spec_from(args)
    if args.perturb_upper is not None and os.environ.get(DEBUG_ENV) != "1":
        raise UsageError(f"--perturb-upper requires {DEBUG_ENV}=1")
    workers = _workers()
    multiplicative = spec.kind in (Kind.STAR, Kind.TIMES)
    if args.check == "nesting" and not multiplicative:
        raise UsageError("--check nesting needs --type star or --type times")
    names = ["sandwich", "sawtooth", "nesting"] if args.check == "all" else [args.check]
    if not multiplicative and "nesting" in names:
        names.remove("nesting")

    reports = {}
    for name in names:
        if name == "sandwich":
            rep = sandwich_sweep(spec, args.lo, args.hi, perturb_upper=args.perturb_upper or 0.0, workers=workers)
        elif name == "sawtooth":
            rep = sawtooth_sweep(spec, args.lo, args.hi, workers=workers)
        else:
            rep = star_times_nesting(spec.lambda0, spec.rho, args.k_max)
        reports[name] = rep.to_dict()

    ok = all(r["ok"] for r in reports.values())
    if len(names) == 1:
        payload = {"command": "verify", **reports[names[0]]}
    else:
        payload = {
            "command": "verify",
            "check": "all",
            "spec": spec.to_dict(),
            "lo": args.lo,
            "hi": args.hi,
            "checks_run": sum(r["checks_run"] for r in reports.values()),
            "violations": [v for r in reports.values() for v in r["violations"]],
            "ok": ok,
            "reports": reports,
        }
    return (0 if ok else 1), _dump_json(payload)


def cmd_optimize(args) -> tuple[int, str]:
    if args.target == "nu":
        if args.lambda0 is None or args.lambda_hat is None:
            raise UsageError("--target nu requires --lambda0 and --lambda-hat")
        nu = bounds.optimal_nu(args.lambda0, args.lambda_hat)
        return 0, _dump_json(
            {
                "command": "optimize",
                "target": "nu",
                "lambda0": args.lambda0,
                "lambda_hat": args.lambda_hat,
                "optimum": nu,
                "objective_value": bounds.plus_upper(args.lambda_hat, args.lambda0, nu),
            }
        )
    rho, value = bounds.optimal_rho()
    gs = minimize_asymptotic_upper(args.rho_lo, args.rho_hi, args.tol)
    return 0, _dump_json(
        {
            "command": "optimize",
            "target": "rho",
            "optimum": rho,
            "objective_value": value,
            "golden_section": {
                "optimum": gs.rho,
                "objective_value": gs.value,
                "rho_lo": args.rho_lo,
                "rho_hi": args.rho_hi,
                "tol": args.tol,
                "interior": gs.interior,
            },
        }
    )


def cmd_drive(args) -> tuple[int, str]:
    spec = _spec_from(args)
    lambda_hat, g = args.oracle_lambda_hat, args.gens
    oracle = threshold_blackbox(lambda_hat, g)
    predicted = g * (loss(spec, lambda_hat).loss + lambda_hat) if lambda_hat >= spec.lambda0 else None
    extra = {"oracle_lambda_hat": lambda_hat, "gens": g, "k_cap": args.k_cap}
    try:
        trace = run_restarts(spec, oracle, args.k_cap)
    except CapExceeded as exc:
        payload = {"command": "drive", **exc.trace.to_dict(), "predicted_total": predicted, **extra, "error": str(exc)}
        return 1, _dump_json(payload)
    return 0, _dump_json({"command": "drive", **trace.to_dict(), "predicted_total": predicted, **extra})


_REAL_OPTIONS = ("--rho", "--alpha", "--tol", "--rho-lo", "--rho-hi", "--perturb-upper")
_NUMBER = re.compile(r"^-(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?$|^-(inf|nan)$", re.IGNORECASE)


def _join_negative_reals(argv: list[str]) -> list[str]:
    """Turn ``--rho -1e-3`` into ``--rho=-1e-3``; argparse would read ``-1e-3`` as a flag."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _REAL_OPTIONS and i + 1 < len(argv) and _NUMBER.match(argv[i + 1]):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="restartlab", description="Restart strategy loss analysis.")
    parser.add_argument("--version", action="version", version=f"restartlab {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write output to PATH (atomically) instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("loss", parents=[common], help="loss curve over a lambda_hat range")
    _add_spec_args(p)
    p.add_argument("--lo", required=True, type=_positive_int)
    p.add_argument("--hi", required=True, type=_positive_int)
    p.add_argument("--stride", type=_positive_int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--bounds", action="store_true", help="add loss_lower and loss_upper columns")
    p.set_defaults(func=cmd_loss)

    p = sub.add_parser("verify", parents=[common], help="numerically check the loss bounds and saw-tooth shape")
    _add_spec_args(p)
    p.add_argument("--lo", required=True, type=_positive_int)
    p.add_argument("--hi", required=True, type=_positive_int)
    p.add_argument("--check", choices=["sandwich", "sawtooth", "nesting", "all"], default="all")
    p.add_argument("--k-max", type=_positive_int, default=40, help="sequence length for the nesting check")
    p.add_argument("--perturb-upper", type=_real, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", parents=[common], help="optimal restart parameter")
    p.add_argument("--target", required=True, choices=["nu", "rho"])
    p.add_argument("--lambda0", type=_positive_int)
    p.add_argument("--lambda-hat", type=_positive_int)
    p.add_argument("--tol", type=_real, default=1e-10)
    p.add_argument("--rho-lo", type=_real, default=1.01)
    p.add_argument("--rho-hi", type=_real, default=10.0)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("drive", parents=[common], help="run the strategy against a threshold oracle")
    _add_spec_args(p)
    p.add_argument("--oracle-lambda-hat", required=True, type=_positive_int)
    p.add_argument("--gens", required=True, type=_positive_int)
    p.add_argument("--k-cap", type=_positive_int, default=DEFAULT_K_CAP)
    p.set_defaults(func=cmd_drive)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        argv = sys.argv[1:] if argv is None else list(argv)
        args = build_parser().parse_args(_join_negative_reals(argv))
        code, text = args.func(args)
        _emit(text, args.out)
        return code
    except (UsageError, RestartLabError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"restartlab: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
