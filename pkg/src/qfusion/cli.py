"""Batch command-line interface: ``qfusion {verify,simulate,distill,transpile}``.

Exit codes: 0 success, 1 a requested check failed, 2 usage or parse error,
3 I/O error (the offending path is named in the message).
"""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import contextmanager

import numpy as np

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EXIT_IO) from e


def _write(path: str, data: str | bytes) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    try:
        with open(path, mode) as fh:
            fh.write(data)
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror or e}", EXIT_IO) from e


@contextmanager
def _sink(path: str | None, out):
    """Collect output and send it to ``path`` (if given) or ``out``."""
    buf = io.StringIO()
    yield buf
    if path is None:
        out.write(buf.getvalue())
    else:
        _write(path, buf.getvalue())


def _parse_circuit(path: str):
    from qfusion.circuit import CircuitError, parse

    try:
        return parse(_read(path))
    except CircuitError as e:
        raise CliError(f"{path}: {e}", EXIT_USAGE) from e


def _range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, steps = text.split(":")
        lo_f, hi_f, n = float(lo), float(hi), int(steps)
    except ValueError as e:
        raise CliError(f"--scan expects lo:hi:steps, got {text!r}", EXIT_USAGE) from e
    if n < 1 or not (0 <= lo_f <= hi_f < 1):
        raise CliError(f"--scan needs 0 <= lo <= hi < 1 and steps >= 1, got {text!r}", EXIT_USAGE)
    return lo_f, hi_f, n


def _bracket(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError as e:
        raise CliError(f"--bracket expects lo:hi, got {text!r}", EXIT_USAGE) from e
    return lo, hi


# --- commands -----------------------------------------------------------------


def cmd_verify(args, out) -> int:
    from qfusion.identities import verify_all

    reports = verify_all(prefix=args.filter)
    width = max((len(r.id) for r in reports), default=2)
    out.write(f"{'id':<{width}}  {'mode':<22}  {'deviation':>10}  status\n")
    for r in reports:
        out.write(f"{r.id:<{width}}  {r.mode:<22}  {r.max_deviation:>10.3e}  {'PASS' if r.passed else 'FAIL'}\n")
    failed = [r for r in reports if not r.passed]
    out.write(f"{len(reports) - len(failed)} passed, {len(failed)} failed\n")
    for r in failed:
        if r.detail:
            out.write(f"  {r.id}: {r.detail}\n")
    return EXIT_FAIL if failed else EXIT_OK


def _assignments(pairs) -> dict:
    values = {}
    for item in pairs or []:
        name, sep, v = item.partition("=")
        if not sep:
            raise CliError(f"--set expects name=value, got {item!r}", EXIT_USAGE)
        try:
            values[name] = int(v)
        except ValueError as e:
            raise CliError(f"--set {name}: value {v!r} is not an integer", EXIT_USAGE) from e
    return values


def cmd_simulate(args, out) -> int:
    from qfusion.circuit import CircuitError, sample

    c = _parse_circuit(args.circuit)
    if args.shots < 0:
        raise CliError("--shots must be non-negative", EXIT_USAGE)
    try:
        hist = sample(c, args.shots, args.seed, classical_inputs=_assignments(args.set))
    except CircuitError as e:
        raise CliError(f"{args.circuit}: {e}", EXIT_USAGE) from e
    out.write(",".join([*c.classical_outputs, "count"]) + "\n")
    for labels, n in hist.items():
        out.write(",".join([*map(str, labels), str(n)]) + "\n")
    return EXIT_OK


DISTILL_COLUMNS = ("p", "rounds", "converged", "final_px", "final_pz", "final_pxz", "raw_per_output")


def cmd_distill(args, out) -> int:
    from qfusion import distill as D

    with _sink(args.out, out) as buf:
        if args.scan:
            lo, hi, steps = _range(args.scan)
            buf.write(",".join(DISTILL_COLUMNS) + "\n")
            for p in np.linspace(lo, hi, steps):
                s = D.greedy_nesting(D.NoiseModel(float(p)))
                f = s.final
                row = [fmt(p), str(len(s.rounds)), str(int(s.converged)),
                       fmt(f.p_x), fmt(f.p_z), fmt(f.p_xz), fmt(s.raw_per_output)]
                buf.write(",".join(row) + "\n")
        if args.threshold:
            lo, hi = _bracket(args.bracket)
            try:
                t = D.threshold_scan(lo, hi, args.tol)
            except D.DistillError as e:
                raise CliError(str(e), EXIT_FAIL) from e
            buf.write(f"threshold,{fmt(t)}\n")
        if args.ratio:
            buf.write(f"quadratic_ratio,{fmt(D.amortized_ratio())}\n")
            buf.write(f"raw_composite_ratio,{D.ARITY['X'] * D.ARITY['Z']}\n")
        if args.blocks:
            buf.write("block,arity,detect,p_x,p_z,p_xz\n")
            for block in ("X", "Z"):
                lead = D.leading_order(block)
                cells = [str(lead[k]).replace(" ", "") for k in ("detect", "p_x", "p_z", "p_xz")]
                buf.write(",".join([block, str(D.ARITY[block]), *cells]) + "\n")
            for key, v in D.z_parity_structure().items():
                buf.write(f"z_parity_{key},{v}\n")
    return EXIT_OK


def cmd_transpile(args, out) -> int:
    from qfusion.circuit import serialize
    from qfusion.transpile import TranspileError, count_resources, recompile

    c = _parse_circuit(args.input)
    try:
        report = count_resources(c)
        result = recompile(c)
    except TranspileError as e:
        raise CliError(f"{args.input}: {e}", EXIT_USAGE) from e
    _write(args.output, serialize(result))
    out.write("# gadget_depth counts sequential layers of non-Clifford gates\n")
    out.write("\n".join(report.lines()) + "\n")
    return EXIT_OK


# --- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qfusion", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check the identity registry")
    v.add_argument("--filter", default=None, metavar="PREFIX", help="only cases whose id starts with PREFIX")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("simulate", help="sample a circuit's classical outputs")
    s.add_argument("--circuit", required=True, metavar="PATH")
    s.add_argument("--shots", type=int, default=1024)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--set", action="append", metavar="NAME=VALUE", help="bind a classical input")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("distill", help="distillation analysis as CSV")
    d.add_argument("--scan", metavar="LO:HI:STEPS", help="greedy nesting at evenly spaced noise levels")
    d.add_argument("--threshold", action="store_true", help="bisect for the convergence threshold")
    d.add_argument("--bracket", default="0.01:0.40", metavar="LO:HI", help="threshold bracket")
    d.add_argument("--tol", type=float, default=1e-3, help="threshold tolerance")
    d.add_argument("--ratio", action="store_true", help="amortized and raw cost ratios")
    d.add_argument("--blocks", action="store_true", help="leading-order block maps and parity counts")
    d.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")
    d.set_defaults(func=cmd_distill)

    t = sub.add_parser("transpile", help="recompile a Clifford+T circuit into Clifford+F")
    t.add_argument("--in", dest="input", required=True, metavar="PATH")
    t.add_argument("--out", dest="output", required=True, metavar="PATH")
    t.set_defaults(func=cmd_transpile)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "distill" and not (args.scan or args.threshold or args.ratio or args.blocks):
        parser.print_usage(sys.stderr)
        print("qfusion distill: choose at least one of --scan, --threshold, --ratio, --blocks", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except CliError as e:
        print(f"qfusion {args.command}: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
