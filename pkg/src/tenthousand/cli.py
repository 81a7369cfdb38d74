"""Command-line front end: solve, verify, simulate, variants, pig, export, serve.

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse),
3 file/output error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__, reference
from .dice import (
    Configuration,
    ZERO,
    build_frequency_table,
    configs_up_to,
    reachable_states,
)
from .oracle import check_move_equivalence, monte_carlo_value, value_iteration
from .policy_io import (
    compare_rendered,
    export_table,
    format_decimal,
    render_cells,
)
from .solver import (
    THRESHOLD,
    bellman_residuals,
    boundary_holds,
    critical_threshold,
    reconcile,
    solve_backward,
    solve_efficient,
    threshold_inequality_holds,
)
from .variants import (
    ACTION_SUBSETS,
    demonstrate_nonuniqueness,
    parse_action_subset,
    solve_pig,
    solve_restricted,
)

OUT_DIR_ENV = "TENTHOUSAND_OUT_DIR"

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_IO = 3


def _out_path(arg: str | None, default_name: str) -> Path:
    if arg:
        return Path(arg)
    base = os.environ.get(OUT_DIR_ENV, ".")
    return Path(base) / default_name


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tenthousand",
        description="Exact solver and advisor for solitaire Ten Thousand (scores in chips of 50 points).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve the game and export the table")
    solve.add_argument("--actions", default="all", help="action subset, e.g. s,r,m5 (default all)")
    solve.add_argument("--out", help="export path (default value_table.<format> in $%s or .)" % OUT_DIR_ENV)
    solve.add_argument("--format", choices=("csv", "json"), default="csv")
    solve.add_argument("--precision", type=int, default=10)
    solve.add_argument("--no-export", action="store_true", help="print the value only")

    verify = sub.add_parser("verify", help="run the verification suite")
    verify.add_argument("--tau-max", type=int, default=80)
    verify.add_argument("--tolerance", type=float, default=1e-9)
    verify.add_argument("--agreement", type=float, default=1e-8,
                        help="allowed gap between value iteration and the exact table")

    simulate = sub.add_parser("simulate", help="Monte Carlo under the optimal policy")
    simulate.add_argument("--episodes", type=int, default=1_000_000)
    simulate.add_argument("--seed", type=int, default=2024)

    variants = sub.add_parser("variants", help="solve restricted-action games")
    variants.add_argument("--actions", help="action subset, e.g. s,r,m5 (default: all published rows)")
    variants.add_argument("--precision", type=int, default=10)

    pig = sub.add_parser("pig", help="solve the one-die Pig game")
    pig.add_argument("--precision", type=int, default=2)

    export = sub.add_parser("export", help="export a solved table")
    export.add_argument("--actions", default="all")
    export.add_argument("--out")
    export.add_argument("--format", choices=("csv", "json"), default="csv")

    table = sub.add_parser("table", help="print the value/policy table")

    serve = sub.add_parser("serve", help="start the advisor service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--log-dir", help="directory for per-session event logs")
    return parser


def _cmd_solve(args) -> int:
    table = solve_restricted(parse_action_subset(args.actions))
    print(format_decimal(table.game_value, args.precision))
    if args.no_export:
        return EXIT_OK
    path = _out_path(args.out, f"value_table.{args.format}")
    try:
        export_table(table, args.format, path, variant=args.actions)
    except OSError as exc:
        print(f"cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"table written to {path}")
    return EXIT_OK


def _cmd_export(args) -> int:
    table = solve_restricted(parse_action_subset(args.actions))
    path = _out_path(args.out, f"value_table.{args.format}")
    try:
        export_table(table, args.format, path, variant=args.actions)
    except OSError as exc:
        print(f"cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"table written to {path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    failures = 0

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        line = f"{'ok  ' if ok else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        print(line)
        if not ok:
            failures += 1

    freq = build_frequency_table()
    diffs = []
    for text, counts in reference.FREQUENCIES.items():
        config = Configuration.parse(text)
        for dice in range(1, 6):
            if freq.count(dice, config) != counts[dice - 1]:
                diffs.append(f"f({dice},[{text}])")
    totals = all(
        sum(freq.count(n, c) for c in list(configs_up_to(n)) + [ZERO]) == 6**n
        for n in range(1, 6)
    )
    report("frequency table vs published counts", not diffs and totals,
           ", ".join(diffs[:4]))

    report("critical thresholds", critical_threshold(5) == 56
           and all(critical_threshold(n) <= 56 for n in range(1, 5)))
    report("stop inequality at 56 for n=1..4",
           all(threshold_inequality_holds(56, n) for n in range(1, 5)))
    report("boundary: rolling at 56 loses chips", boundary_holds())

    table = solve_backward()
    value = format_decimal(table.game_value, 10)
    report("game value 5.8720189185", value == reference.GAME_VALUE_10, value)

    residuals = bellman_residuals(table)
    report("one-step optimality residuals exactly zero", not residuals,
           residuals[0] if residuals else "")

    gathered = solve_efficient()
    rec = reconcile(table, gathered)
    report(f"gathered-class solve agrees on {rec.cells_checked} cells", rec.ok,
           rec.mismatches[0] if rec.mismatches else "")

    rendered = render_cells(table, reachable_states())
    comparison = compare_rendered(
        rendered, reference.VALUE_TABLE, reference.VALUE_TABLE_ACTION_ROW
    )
    detail = comparison.mismatches[0] if comparison.mismatches else \
        f"{len(comparison.rounding_notes)} last-digit difference(s) noted"
    report(f"value/policy table vs published ({comparison.cells_compared} cells)",
           comparison.ok, detail)
    for note in comparison.rounding_notes:
        print(f"      note: {note}")

    snapshot = value_iteration(tau_max=args.tau_max, tolerance=args.tolerance)
    gap = snapshot.max_difference(table)
    report(
        f"value iteration (k={snapshot.k}) agrees within {args.agreement:g}",
        snapshot.w1_is_tau and snapshot.monotone and gap <= args.agreement,
        f"max gap {gap:.2e}",
    )

    moves = check_move_equivalence()
    report(f"move chaining equivalence ({moves.chains_checked} chains)", moves.ok)

    print("verification", "FAILED" if failures else "passed")
    return EXIT_VERIFY if failures else EXIT_OK


def _cmd_simulate(args) -> int:
    table = solve_backward()
    result = monte_carlo_value(table, args.episodes, args.seed)
    exact = float(table.game_value)
    print(f"episodes: {result.episodes}")
    print(f"seed: {result.seed}")
    print(f"mean payoff: {result.mean:.6f}")
    print(f"standard error: {result.stderr:.6f}")
    print(f"exact value: {exact:.10f}")
    print(f"within 3 standard errors: {'yes' if result.within(exact) else 'NO'}")
    return EXIT_OK if result.within(exact) else EXIT_VERIFY


def _cmd_variants(args) -> int:
    if args.actions:
        table = solve_restricted(parse_action_subset(args.actions))
        print(format_decimal(table.game_value, args.precision))
        return EXIT_OK
    for name, subset in ACTION_SUBSETS:
        table = solve_restricted(subset)
        print(f"{name:22s} {format_decimal(table.game_value, args.precision)}")
    return EXIT_OK


def _cmd_pig(args) -> int:
    pig = solve_pig()
    witness = demonstrate_nonuniqueness()
    print(f"threshold: {pig.threshold}")
    print(f"value: {format_decimal(pig.game_value, args.precision)}")
    print(f"geometric growth rate of the non-minimal solutions: {witness.growth:.6f}")
    return EXIT_OK


def _cmd_table(args) -> int:
    table = solve_backward()
    print(render_cells(table, reachable_states()).text, end="")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(log_dir=args.log_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def run(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "verify": _cmd_verify,
        "simulate": _cmd_simulate,
        "variants": _cmd_variants,
        "pig": _cmd_pig,
        "export": _cmd_export,
        "table": _cmd_table,
        "serve": _cmd_serve,
    }
    return handlers[args.command](args)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
