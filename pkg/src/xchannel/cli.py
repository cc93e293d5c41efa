"""Command-line interface.

Exit codes: 0 on success, 1 on usage errors, 2 when verification fails.
"""
from __future__ import annotations

import argparse
import contextlib
import sys

from xchannel import bounds, sweep
from xchannel.bounds import ChannelParams, Receiver
from xchannel.sweep import GridRange, SweepConfig, fmt

EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def parse_range(text: str, log: bool = False) -> GridRange:
    """``min:max:count`` -> GridRange."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range {text!r} is not of the form min:max:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"range {text!r} is not of the form min:max:count") from None
    try:
        return GridRange(lo, hi, count, log)
    except ValueError as exc:
        raise UsageError(f"range {text!r}: {exc}") from None


def _powers(args) -> tuple:
    p1, p2 = args.p1, args.p2
    if args.db:
        p1, p2 = db_to_linear(p1), db_to_linear(p2)
    return p1, p2


def _params(a2, b2, p1, p2) -> ChannelParams:
    try:
        return ChannelParams(a2, b2, p1, p2)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _check_delta(delta):
    if delta is not None and not delta > 0:
        raise UsageError(f"--delta must be positive, got {delta!r}")


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_eval(args) -> int:
    p1, p2 = _powers(args)
    params = _params(args.a2, args.b2, p1, p2)
    _check_delta(args.delta)
    row = sweep.evaluate_point(params, args.delta)
    sides = sweep.reported_sides(params.a2, params.b2) or tuple(Receiver)
    lines = [
        f"params a2={fmt(params.a2)} b2={fmt(params.b2)} p1={fmt(params.p1)} p2={fmt(params.p2)}",
        f"region {row.region} boundary={fmt(row.region.boundary)}",
    ]
    for side in sides:
        lines.append(f"R_MAC,{side.value} {fmt(bounds.mac_sum_rate(params, side))}")
    lines.append("kind side applicable value gap reason")
    for ev in row.evaluations:
        lines.append(
            " ".join(
                [
                    ev.kind.tag,
                    str(ev.kind.side.value),
                    fmt(ev.applicable),
                    fmt(ev.value_bits) or "-",
                    fmt(ev.gap_bits) or "-",
                    ev.inapplicability_reason or "-",
                ]
            )
        )
    if row.best_kind is None:
        lines.append("best none")
    else:
        lines.append(f"best {row.best_kind.name} {fmt(row.best_value_bits)}")
    if args.delta is not None:
        via = ",".join(k.name for k in sweep.KINDS if k in row.certifying_bounds) or "-"
        lines.append(f"delta {fmt(args.delta)} member={fmt(row.r_delta_member)} via {via}")
    with _output(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def cmd_sweep(args) -> int:
    p1, p2 = _powers(args)
    _check_delta(args.delta)
    a2 = parse_range(args.a2, args.log)
    b2 = parse_range(args.b2, args.log)
    try:
        config = SweepConfig(a2, b2, p1, p2, args.delta)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    rows = sweep.sweep_plane(config, workers=args.workers)
    with _output(args.output) as fh:
        sweep.write_csv(fh, sweep.SWEEP_HEADER, (sweep.sweep_row_cells(r) for r in rows))
    return 0


def cmd_curve(args) -> int:
    p1, p2 = _powers(args)
    _check_delta(args.delta)
    b2 = args.b2 if args.b is None else args.b * args.b
    _params(1.0, b2, p1, p2)
    if b2 > 1.0:
        raise UsageError(f"curve needs b² <= 1, got {b2!r}")
    a2 = parse_range(args.a2, args.log)
    rows = sweep.sweep_curve_vs_a2(p1, p2, b2, a2, args.delta)
    with _output(args.output) as fh:
        sweep.write_csv(fh, sweep.CURVE_HEADER, (sweep.curve_row_cells(r) for r in rows))
    return 0


def _delta_list(text: str) -> list:
    try:
        deltas = [float(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise UsageError(f"--delta {text!r} is not a comma-separated list of numbers") from None
    if not deltas or any(not d > 0 for d in deltas):
        raise UsageError("--delta values must be positive")
    return deltas


def cmd_thresholds(args) -> int:
    deltas = _delta_list(args.delta)
    p1 = parse_range(args.p1, args.log)
    rows = sweep.threshold_curve_vs_p1(deltas, p1)
    with _output(args.output) as fh:
        sweep.write_csv(fh, sweep.THRESHOLD_HEADER, ([fmt(x) for x in r] for r in rows))
    return 0


def cmd_delta(args) -> int:
    p1, p2 = _powers(args)
    deltas = _delta_list(args.delta)
    _params(args.a2, args.b2, p1, p2)
    if args.a2 < 1.0 or args.b2 < 1.0:
        raise UsageError("--a2 and --b2 must be >= 1 (they set the strong gain for bound B)")
    lines = ["delta side kind condition threshold"]
    for d in deltas:
        lines += [
            f"{fmt(d)} 1 A a2> {fmt(bounds.delta_threshold_a(p1, d))}",
            f"{fmt(d)} 1 B b2< {fmt(bounds.delta_threshold_b(args.a2, p2, d))}",
            f"{fmt(d)} 1 C b2< {fmt(bounds.delta_threshold_c(p1, d))}",
            f"{fmt(d)} 2 A b2> {fmt(bounds.delta_threshold_a(p2, d))}",
            f"{fmt(d)} 2 B a2< {fmt(bounds.delta_threshold_b(args.b2, p1, d))}",
            f"{fmt(d)} 2 C a2< {fmt(bounds.delta_threshold_c(p2, d))}",
        ]
    with _output(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    from xchannel.verify import run_verification

    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if not args.tolerance > 0:
        raise UsageError("--tolerance must be positive")
    report = run_verification(
        args.trials, args.seed, tolerance=args.tolerance, perturb_etarho=args.perturb_etarho
    )
    lines = [f"seed {args.seed} trials {args.trials}", "suite cases max_residual tolerance result"]
    for s in report.suites:
        status = "PASS" if s.passed else "FAIL"
        lines.append(f"{s.name} {s.trials} {s.max_residual:.3e} {s.tolerance:.1e} {status}")
    for s in report.suites:
        if not s.passed:
            case = " ".join(f"{k}={v!r}" for k, v in s.first_failure.items())
            lines.append(f"first failure in {s.name}: {case}")
    lines.append("PASS" if report.passed else "FAIL")
    with _output(args.output) as fh:
        fh.write("\n".join(lines) + "\n")
    return 0 if report.passed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="xchannel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def powers(p, required=True):
        p.add_argument("--p1", type=float, required=required, help="power of transmitter 1")
        p.add_argument("--p2", type=float, required=required, help="power of transmitter 2")
        p.add_argument("--db", action="store_true", help="powers are given in dB")

    def output(p):
        p.add_argument("-o", "--output", help="output file (default: stdout)")

    p = sub.add_parser("eval", help="evaluate every bound at one channel")
    p.add_argument("--a2", type=float, required=True)
    p.add_argument("--b2", type=float, required=True)
    powers(p)
    p.add_argument("--delta", type=float)
    output(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="CSV over an (a², b²) grid")
    p.add_argument("--a2", default="1:20:200", help="min:max:count (default 1:20:200)")
    p.add_argument("--b2", default="0:1:200", help="min:max:count (default 0:1:200)")
    powers(p)
    p.add_argument("--delta", type=float)
    p.add_argument("--log", action="store_true", help="log-spaced grids")
    p.add_argument("--workers", type=int, default=1)
    output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("curve", help="CSV of bounds A and C against a²")
    p.add_argument("--a2", default="1:100:200", help="min:max:count (default 1:100:200)")
    gain = p.add_mutually_exclusive_group(required=True)
    gain.add_argument("--b2", type=float)
    gain.add_argument("--b", type=float, help="cross gain b (squared internally)")
    powers(p)
    p.add_argument("--delta", type=float)
    p.add_argument("--log", action="store_true")
    output(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("thresholds", help="CSV of the bound-A a² threshold against P₁")
    p.add_argument("--delta", required=True, help="comma-separated gap targets in bits")
    p.add_argument("--p1", default="0:10:101", help="min:max:count (default 0:10:101)")
    p.add_argument("--log", action="store_true")
    output(p)
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("delta", help="all six delta thresholds")
    p.add_argument("--delta", required=True, help="comma-separated gap targets in bits")
    powers(p)
    p.add_argument("--a2", type=float, default=1.0, help="a² used by the side-1 B threshold")
    p.add_argument("--b2", type=float, default=1.0, help="b² used by the side-2 B threshold")
    output(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("verify", help="randomized oracle cross-checks")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--perturb-etarho", type=float, default=0.0)
    output(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"xchannel {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
