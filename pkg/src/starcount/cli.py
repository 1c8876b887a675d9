"""Command-line entry point: ``starcount {gen,exact,estimate,bench}``.

Output is JSON (or CSV for ``bench``) on stdout unless ``--out`` is given.
Runs are reproducible: the seed comes from ``--seed``, else the
``STARCOUNT_SEED`` environment variable, else 0.

Exit codes: 0 success, 1 other failure, 2 parse/usage error,
3 invalid argument or violated constraint, 4 ratio-bound violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bench as bench_mod
from .directed import estimate_path2, exactly_in_out_stars
from .errors import InvalidArgumentError, ParseError, RatioViolationError, StarCountError
from .estimator import EstimatorParams, count_stars
from .exact import exact_counts, l_prime
from .instances import GeneratorSpec, load_csv, load_edge_list, write_edge_list
from .oracle import as_weighted_oracle, make_rng

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_CONSTRAINT = 3
EXIT_RATIO = 4

MODES = ("undirected", "in-star", "out-star", "path2")


def resolve_seed(flag):
    if flag is not None:
        return flag
    env = os.environ.get("STARCOUNT_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidArgumentError(f"STARCOUNT_SEED must be an integer, got {env!r}") from None
    return 0


def _value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load_source(args):
    if args.input and args.csv:
        raise InvalidArgumentError("give either --input or --csv, not both")
    if args.input:
        return load_edge_list(args.input)
    if args.csv:
        if not args.column:
            raise InvalidArgumentError("--csv needs --column")
        return load_csv(args.csv, args.column)
    raise InvalidArgumentError("one of --input or --csv is required")


def cmd_gen(args) -> None:
    if args.spec:
        text = args.spec
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        spec = GeneratorSpec.from_json(text)
    else:
        if not args.family:
            raise InvalidArgumentError("gen needs a family or --spec")
        params = {}
        for item in args.params:
            key, sep, val = item.partition("=")
            if not sep:
                raise InvalidArgumentError(f"parameter {item!r} is not key=value")
            params[key] = _value(val)
        spec = GeneratorSpec(args.family, params, resolve_seed(args.seed))
    graph = spec.build()
    if args.out:
        write_edge_list(graph, args.out)
        if args.manifest:
            with open(args.manifest, "w", encoding="utf-8") as fh:
                fh.write(spec.to_json() + "\n")
    else:
        write_edge_list(graph, sys.stdout)


def cmd_exact(args) -> None:
    source = _load_source(args)
    ps = args.p or [2]
    _emit(_dumps(exact_counts(source, ps).to_dict()), args.out)


def cmd_estimate(args) -> None:
    seed = resolve_seed(args.seed)
    source = _load_source(args)
    p = (args.p or [2])[0]
    rng = make_rng(seed)
    mode = args.mode
    if mode == "path2":
        if args.r is None:
            raise InvalidArgumentError("path2 mode needs --r")
        if args.csv:
            raise InvalidArgumentError("path2 mode needs a directed edge list")
        src = "supplied"
        lp = args.l_prime
        warn = []
        if lp is None:
            lp = l_prime(source)
            src = "exact"
            warn.append("L' computed exactly from the full degree scan (harness convenience)")
        report = estimate_path2(source, args.r, args.epsilon, lp, rng, seed=seed,
                                validate=args.validate, l_prime_source=src)
        report.warnings[:0] = warn
        _emit(_dumps(report.to_dict()), args.out)
        return
    params = EstimatorParams(p, args.epsilon, seed=seed)
    if mode == "undirected":
        report = count_stars(as_weighted_oracle(source), params, rng=rng)
    else:
        report = exactly_in_out_stars(source, p, "in" if mode == "in-star" else "out", params, rng)
    _emit(_dumps(report.to_dict()), args.out)


def cmd_bench(args) -> None:
    sweep = None
    if args.sweep:
        text = args.sweep
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        try:
            sweep = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad sweep JSON: {exc}") from None
    rows = bench_mod.run_bench(sweep, trials=args.trials, seed=resolve_seed(args.seed), timing=args.timing)
    if args.format == "json":
        data = [
            {k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in r.as_dict().items()}
            for r in rows
        ]
        _emit(_dumps(data), args.out)
    else:
        _emit(bench_mod.rows_to_csv(rows), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="starcount", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, source=True):
        if source:
            p.add_argument("--input", help="edge-list file")
            p.add_argument("--csv", help="CSV file (table column input)")
            p.add_argument("--column", help="CSV column holding the labels")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", help="write here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    g = sub.add_parser("gen", help="generate a graph as an edge list")
    g.add_argument("family", nargs="?")
    g.add_argument("params", nargs="*", metavar="key=value")
    g.add_argument("--spec", help="GeneratorSpec JSON (inline or a file path)")
    g.add_argument("--manifest", help="also write the GeneratorSpec JSON here")
    common(g, source=False)
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("exact", help="exact counts by brute force")
    common(e)
    e.add_argument("--p", type=int, action="append")
    e.set_defaults(func=cmd_exact)

    s = sub.add_parser("estimate", help="sublinear estimate")
    common(s)
    s.add_argument("--p", type=int, action="append")
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--mode", choices=MODES, default="undirected")
    s.add_argument("--r", type=float)
    s.add_argument("--l-prime", dest="l_prime", type=float)
    s.add_argument("--validate", action="store_true", help="scan the ratio bound first (path2)")
    s.set_defaults(func=cmd_estimate)

    b = sub.add_parser("bench", help="query-count sweep")
    common(b, source=False)
    b.add_argument("--sweep", help="sweep JSON (inline or a file path); default built in")
    b.add_argument("--trials", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="fill the wall_time column")
    b.set_defaults(func=cmd_bench, format="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_PARSE
    if args.format == "csv" and args.command != "bench":
        parser.print_usage(sys.stderr)
        print("starcount: --format csv applies to bench only", file=sys.stderr)
        return EXIT_PARSE
    try:
        args.func(args)
    except ParseError as exc:
        print(f"starcount: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RatioViolationError as exc:
        print(f"starcount: {exc}", file=sys.stderr)
        return EXIT_RATIO
    except InvalidArgumentError as exc:
        print(f"starcount: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (StarCountError, OSError) as exc:
        print(f"starcount: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
