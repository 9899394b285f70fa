"""Command-line driver.

Every command reads a scenario with ``--scenario PATH`` and writes
tab-separated text to stdout (or ``--out``).  Floats are printed with
``repr`` so values round-trip exactly.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from .bounds import bound_report, is_feasible_exact, is_feasible_modified
from .errors import (
    GridTooLarge,
    InfeasibleSystem,
    NoConvergence,
    ParseError,
    QuantumUnderflow,
    SchemaError,
    ValidationError,
)
from .geometry import necessary_condition, required_capacity
from .optimize import n_flow_optimize, optimize
from .scenario import read_scenario
from .simulator import default_horizon, quantize, simulate
from .sweep import DEFAULT_MAX_CELLS, classify, format_cells, midpoint_audit, parse_grid

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_INVALID = 4
EXIT_INFEASIBLE = 5
EXIT_NO_CONVERGENCE = 6
EXIT_GRID_TOO_LARGE = 7
EXIT_VERIFY_MISMATCH = 8

VERIFY_RTOL = 1e-6


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(x) if isinstance(x, float) else str(x)


def _row(*values) -> str:
    return "\t".join(_fmt(v) for v in values)


def _parse_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_bound(args) -> int:
    spec = read_scenario(args.scenario).spec
    q = args.quanta
    if len(q) != spec.n:
        print(f"error: expected {spec.n} quanta, got {len(q)}", file=sys.stderr)
        return EXIT_USAGE
    feas_exact = is_feasible_exact(spec, q)
    feas_mod = is_feasible_modified(spec, q)
    lines = [_row("flow", "D", "D_hat", "f", "feasible_exact", "feasible_modified")]
    for i in range(spec.n):
        rep = bound_report(spec, q, i)
        lines.append(_row(i, rep.exact_bound, rep.modified_bound, rep.deviation,
                          feas_exact, feas_mod))
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    spec = read_scenario(args.scenario).spec
    ok = necessary_condition(spec)
    _emit(_row("required_capacity", required_capacity(spec)) + "\n"
          + _row("capacity", spec.capacity) + "\n"
          + _row("necessary_condition", ok) + "\n", args.out)
    return EXIT_OK if ok else EXIT_INFEASIBLE


def format_trace(trace) -> str:
    lines = ["iteration\tvalue"]
    lines += [f"{k}\t{x!r}" for k, x in enumerate(trace.iterates)]
    return "\n".join(lines) + "\n"


def cmd_optimize(args) -> int:
    spec = read_scenario(args.scenario).spec
    result = optimize(spec, args.algorithm, args.start, args.tol)
    lines = [
        _row("algorithm", result.algorithm),
        _row("iterations", result.trace.iterations),
        _row("converged", result.trace.converged),
        _row("final_residual", result.trace.final_residual),
        _row("objective", result.objective),
    ]
    lines += [_row(f"q_{i}", x) for i, x in enumerate(result.quanta)]
    status = EXIT_OK
    if args.verify and result.algorithm == "two-flow":
        other = n_flow_optimize(spec, tol=args.tol)
        diff = max(abs(a - b) / max(abs(a), 1.0) for a, b in zip(result.quanta, other.quanta))
        lines.append(_row("verify_max_rel_diff", diff))
        if diff > VERIFY_RTOL:
            status = EXIT_VERIFY_MISMATCH
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _emit(format_trace(result.trace), args.out)
    return status


def cmd_simulate(args) -> int:
    spec = read_scenario(args.scenario).spec
    if args.quanta is None:
        q_real = optimize(spec).quanta
    else:
        q_real = args.quanta
        if len(q_real) != spec.n:
            print(f"error: expected {spec.n} quanta, got {len(q_real)}", file=sys.stderr)
            return EXIT_USAGE
    q = quantize(q_real)
    horizon = args.horizon if args.horizon is not None else default_horizon(spec)
    report = simulate(spec, q.values, horizon)
    lines = [_row("flow", "quantum_used", "deadline", "worst_delay", "met")]
    for i, f in enumerate(spec.flows):
        w = report.worst_delay[i]
        lines.append(_row(i, q[i], f.deadline, w, w <= f.deadline))
    _emit("\n".join(lines) + "\n", args.out)
    if report.horizon_too_short:
        print("warning: backlog still growing at the horizon; extend --horizon",
              file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = read_scenario(args.scenario).spec
    grid = parse_grid(args.grid, args.quanta)
    cells = classify(spec, grid, args.max_cells)
    audit = midpoint_audit(spec, grid, cells) if cells else None
    _emit(format_cells(cells, audit), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drrquanta",
        description="DRR delay bounds, optimal quanta and packet-level validation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", required=True, metavar="PATH")
        p.add_argument("--out", metavar="PATH")
        p.set_defaults(func=func)
        return p

    p = add("bound", cmd_bound, "exact and modified delay bounds at given quanta")
    p.add_argument("--quanta", type=_parse_list, required=True, metavar="LIST")

    p = add("optimize", cmd_optimize, "maximum-sum quanta via fixed-point iteration")
    p.add_argument("--algorithm", choices=("auto", "two-flow", "n-flow"), default="auto")
    p.add_argument("--start", type=float)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--verify", action="store_true",
                   help="cross-check the two-flow result against the n-flow map")

    p = add("simulate", cmd_simulate, "simulate DRR with floored quanta")
    p.add_argument("--quanta", type=_parse_list, metavar="LIST")
    p.add_argument("--horizon", type=float)

    p = add("sweep", cmd_sweep, "classify a grid of two quanta")
    p.add_argument("--grid", required=True, metavar="SPEC",
                   help="I,J,QI_MIN,QI_MAX,QJ_MIN,QJ_MAX,STEP (0-based flows)")
    p.add_argument("--quanta", type=_parse_list, metavar="LIST",
                   help="values for the flows not being swept")
    p.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)

    add("check", cmd_check, "minimum-capacity test only")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, QuantumUnderflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleSystem as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except GridTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRID_TOO_LARGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
