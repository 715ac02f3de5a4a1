"""Command-line entry point.

Exit codes: 0 success or accepted, 1 rejected, 2 malformed input,
64 usage error (including out-of-range parameters), 65 resource guard,
70 internal failure (a diagnosis that should never fail did).
"""
from __future__ import annotations

import argparse
import json
import sys
from math import factorial

from .builder import compressed_graph, generate
from .compress import parse_plan
from .counting import (
    admissible_lengths,
    best_eulerian_count,
    brute_force_eulerian_count,
    cycle_count,
    max_removals,
    uword_lower_bound,
)
from .errors import (
    BoundExceededError,
    InternalConsistencyError,
    MalformedInputError,
    NotEulerianError,
    ResourceGuardError,
    UnsupportedParameterError,
)
from .graph import to_dot
from .io import parse_matrix
from .perm import enumerate_dperms, format_matrix
from .verify import verify_ucycle, verify_uword

EXIT_OK, EXIT_REJECTED, EXIT_MALFORMED = 0, 1, 2
EXIT_USAGE, EXIT_RESOURCES, EXIT_INTERNAL = 64, 65, 70

COUNT_QUANTITIES = ("clusters", "edges", "cycles", "bound", "lengths", "lowerbound", "eulerian")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_generate(args) -> int:
    plan = None
    if args.plan:
        plan = parse_plan(_read(args.plan))
        if (plan.n, plan.d) != (args.n, args.d):
            raise UsageError(f"plan is for n={plan.n}, d={plan.d}")
        if args.removals is not None and args.removals != len(plan):
            raise UsageError(f"--removals {args.removals} disagrees with plan of {len(plan)} steps")
    removals = args.removals or 0
    if args.save_plan:
        g, used = compressed_graph(args.n, args.d, removals, plan)
        _write(args.save_plan, used.serialize())
    u = generate(args.n, args.d, removals, seed=args.seed, plan=plan)
    if args.normalize:
        u = u.normalized()
    _write(args.out, u.to_json() + "\n" if args.format == "json" else u.to_text())
    summary = f"length {u.columns} removals {u.removals} plan {u.plan_digest}\n"
    (sys.stdout if args.out and args.out != "-" else sys.stderr).write(summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    rows, n = parse_matrix(_read(args.file))
    if args.n is not None:
        if n is not None and n != args.n:
            raise MalformedInputError(f"input declares n={n} but --n {args.n} given")
        n = args.n
    if n is None:
        raise UsageError("--n is required when the input does not declare n")
    report = (verify_ucycle if args.cyclic else verify_uword)(rows, n)
    sys.stdout.write(report.to_json() + "\n" if args.format == "json" else report.to_text())
    return EXIT_OK if report.accepted else EXIT_REJECTED


def cmd_graph(args) -> int:
    g, _ = compressed_graph(args.n, args.d, args.removals)
    _write(args.dot, to_dot(g))
    return EXIT_OK


def cmd_count(args) -> int:
    n, d, what = args.graph_n, args.graph_d, args.quantity
    if what == "clusters":
        value = factorial(n - 1) ** (d - 1)
    elif what == "edges":
        value = factorial(n) ** (d - 1) - args.removals * (n - 1)
    elif what == "cycles":
        if args.i is None:
            raise UsageError("count cycles needs --i")
        value = cycle_count(n, d, args.i)
    elif what == "bound":
        value = max_removals(n, d)
    elif what == "lengths":
        value = admissible_lengths(n, d)
    elif what == "lowerbound":
        value = uword_lower_bound(n, d)
    else:
        g, _ = compressed_graph(n, d, args.removals)
        start = g.out_edges[min(g.vertices)][0]
        value = best_eulerian_count(g, (start.source, start.target))
        if args.brute_force:
            oracle = brute_force_eulerian_count(g, (start.source, start.target))
            if oracle != value:
                raise InternalConsistencyError(f"BEST gives {value}, brute force {oracle}")
    if args.format == "json":
        payload = {"quantity": what, "n": n, "d": d, "value": value}
        if what == "cycles":
            payload["i"] = args.i
        if what in ("edges", "eulerian"):
            payload["removals"] = args.removals
        print(json.dumps(payload))
    else:
        print(" ".join(map(str, value)) if isinstance(value, list) else value)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    out = sys.stdout
    for k, p in enumerate(enumerate_dperms(args.n, args.d)):
        if k:
            out.write("\n")
        out.write(format_matrix(p) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uwords", description="Shortened universal words for d-dimensional permutations.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="build a u-word")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--removals", type=int, default=None, help="number of cycle-removal steps")
    g.add_argument("--seed", type=int, default=None, help="shuffle Eulerian edge choice")
    g.add_argument("--format", choices=("text", "json"), default="text")
    g.add_argument("--out", default=None)
    g.add_argument("--plan", default=None, help="replay a removal plan file")
    g.add_argument("--save-plan", default=None, help="write the removal plan used")
    g.add_argument("--normalize", action="store_true", help="relabel each row to 1..k")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="check a u-word or u-cycle")
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--cyclic", action="store_true")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("file", help="input file, or - for stdin")
    v.set_defaults(func=cmd_verify)

    gr = sub.add_parser("graph", help="export the clustered graph as DOT")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--d", type=int, required=True)
    gr.add_argument("--removals", type=int, default=0)
    gr.add_argument("--dot", required=True, help="output file, or - for stdout")
    gr.set_defaults(func=cmd_graph)

    c = sub.add_parser("count", help="exact counts")
    c.add_argument("quantity", choices=COUNT_QUANTITIES)
    c.add_argument("--graph-n", type=int, required=True)
    c.add_argument("--graph-d", type=int, required=True)
    c.add_argument("--i", type=int, default=None)
    c.add_argument("--removals", type=int, default=0)
    c.add_argument("--brute-force", action="store_true", help="cross-check eulerian with exhaustive search")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_count)

    e = sub.add_parser("enumerate", help="list all d-dimensional n-permutations")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--d", type=int, required=True)
    e.set_defaults(func=cmd_enumerate)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"uwords: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BoundExceededError, UnsupportedParameterError) as exc:
        print(f"uwords: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"uwords: {exc}", file=sys.stderr)
        return EXIT_RESOURCES
    except MalformedInputError as exc:
        print(f"uwords: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"uwords: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (InternalConsistencyError, NotEulerianError) as exc:
        print(f"uwords: internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())
