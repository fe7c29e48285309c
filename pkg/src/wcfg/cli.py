"""Command-line interface.

Subcommands: propagate, soft, solve, oracle, bench.  Exit codes: 0 on
success, 1 for infeasible/unsat results, 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import decomposition, files, oracle, propagator, report, scheduling, soft
from .grammar import validate
from .propagator import INFEASIBLE
from .solver import BACKEND_CODES, BACKENDS

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2


class CliError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}")


def _load_grammar(path: str):
    grammar = files.parse_grammar(_read(path))
    diags = validate(grammar)
    if diags:
        raise CliError(f"{path}: " + "; ".join(diags))
    return grammar


def _backend(name: str) -> str:
    backend = BACKEND_CODES.get(name, name)
    if backend not in BACKENDS:
        raise CliError(f"unknown backend '{name}' "
                       f"(use m, d, de or a full name)")
    return backend


def cmd_propagate(args) -> int:
    grammar = _load_grammar(args.grammar)
    domains = files.parse_domains(_read(args.domains))
    backend = _backend(args.backend)
    if grammar.has_epsilon:
        if backend != "monolithic":
            raise CliError("epsilon grammars support the monolithic backend only")
        result = soft.propagate_epsilon(grammar, args.z, domains)
    elif backend == "monolithic":
        result = propagator.propagate(grammar, args.z, domains)
    else:
        result = decomposition.propagate(
            grammar, args.z, domains,
            entailment=(backend == "decomposition-entailment"))
    if result is INFEASIBLE:
        print("infeasible")
        return EXIT_INFEASIBLE
    parts = [f"X{i}={{{','.join(sorted(result.domains.domain(i)))}}}"
             for i in range(1, len(domains) + 1)]
    print(" ".join(parts) + f" root_min={result.root_min}")
    return EXIT_OK


def cmd_soft(args) -> int:
    base = _load_grammar(args.grammar)
    if args.distance == "hamming":
        encoded = soft.hamming_encoding(base)
    else:
        encoded = soft.edit_encoding(base)
    text = files.format_grammar(encoded)
    if args.output:
        with open(args.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    if args.domains:
        domains = files.parse_domains(_read(args.domains))
        run = soft.propagate_epsilon if encoded.has_epsilon \
            else lambda g, z, d: propagator.propagate(g, z, d)
        result = run(encoded, args.z, domains)
        if result is INFEASIBLE:
            print("infeasible", file=sys.stderr)
            return EXIT_INFEASIBLE
        parts = [f"X{i}={{{','.join(sorted(result.domains.domain(i)))}}}"
                 for i in range(1, len(domains) + 1)]
        print(" ".join(parts) + f" root_min={result.root_min}",
              file=sys.stderr)
    return EXIT_OK


def _print_log(sol) -> None:
    print(f"cost={sol.cost} time={sol.time:.3f} bt={sol.backtracks}")


def cmd_solve(args) -> int:
    inst = files.parse_instance(_read(args.instance))
    diags = scheduling.validate_instance(inst)
    if diags:
        raise CliError(f"{args.instance}: " + "; ".join(diags))
    result = scheduling.solve_instance(
        inst, backend=_backend(args.backend),
        time_limit=args.time_limit, on_solution=_print_log)
    print(f"status={result.status} BT={result.total_backtracks}")
    return EXIT_OK if result.status != "Unsat" else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    grammar = _load_grammar(args.grammar)
    if args.string is not None:
        w = oracle.parse_min_weight(grammar, args.string)
        if w == oracle.INF:
            print(f"{args.string}: not derivable")
            return EXIT_INFEASIBLE
        print(f"{args.string}: min_weight={int(w)}")
        return EXIT_OK
    table = oracle.enumerate_min_weights(grammar, args.max_len)
    for s in sorted(table, key=lambda s: (len(s), s)):
        print(f"{s}: {int(table[s])}")
    return EXIT_OK


def cmd_bench(args) -> int:
    inst_files = sorted(f for f in os.listdir(args.directory)
                        if f.endswith(".inst"))
    if not inst_files:
        raise CliError(f"no .inst files in {args.directory}")
    rows = []
    for fname in inst_files:
        inst = files.parse_instance(_read(os.path.join(args.directory, fname)))
        diags = scheduling.validate_instance(inst)
        if diags:
            raise CliError(f"{fname}: " + "; ".join(diags))
        stem = fname[:-len(".inst")]
        for backend in BACKENDS:
            result = scheduling.solve_instance(
                inst, backend=backend, time_limit=args.time_limit)
            best = result.best
            rows.append({
                "instance": stem,
                "backend": backend,
                "cost": best.cost if best else "-",
                "time": f"{best.time:.3f}" if best else "-",
                "bt": best.backtracks if best else "-",
                "BT": result.total_backtracks,
            })
    out_dir = args.output or args.directory
    csv_path, fig_path = report.bench_paths(out_dir)
    report.write_bench_csv(rows, csv_path)
    try:
        figure_rows = [dict(r) for r in rows if r["cost"] != "-"]
        if figure_rows:
            report.render_bench_figure(figure_rows, fig_path)
            print(f"wrote {csv_path} and {fig_path}")
        else:
            print(f"wrote {csv_path} (no feasible runs to plot)")
    except ImportError:
        print(f"wrote {csv_path} (matplotlib unavailable, figure skipped)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wcfg",
        description="Weighted grammar constraint engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", help="prune domains under a weight budget")
    p.add_argument("grammar")
    p.add_argument("domains")
    p.add_argument("--z", type=int, required=True, help="weight budget")
    p.add_argument("--backend", default="m",
                   help="m (monolithic), d (decomposition), de (d + entailment)")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("soft", help="encode a soft grammar constraint")
    p.add_argument("grammar")
    p.add_argument("--distance", choices=["hamming", "edit"], required=True)
    p.add_argument("--z", type=int, default=0, help="distance budget")
    p.add_argument("--domains", help="optionally propagate on these domains")
    p.add_argument("-o", "--output", help="write encoded grammar here")
    p.set_defaults(func=cmd_soft)

    p = sub.add_parser("solve", help="branch-and-bound a scheduling instance")
    p.add_argument("instance")
    p.add_argument("--backend", default="m")
    p.add_argument("--time-limit", type=float, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force spot checks")
    p.add_argument("grammar")
    p.add_argument("--max-len", type=int, default=4)
    p.add_argument("--string", help="min weight of one concrete string")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run an instance directory, emit CSV + figure")
    p.add_argument("directory")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("-o", "--output", help="output directory (default: input dir)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (CliError, files.ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
