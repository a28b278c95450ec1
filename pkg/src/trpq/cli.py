"""Command-line interface.

Subcommands: validate, query, gen, expand, classify, bench.  Exit codes:
0 success, 1 unexpected error, 2 parse error (query text or bundle files),
3 graph validation error, 4 fragment/algorithm mismatch, 5 resource limit.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .bundle import load_bundle, save_bundle
from .errors import (
    DomainTooLarge,
    FormatError,
    FragmentError,
    QuerySyntaxError,
    ResourceLimit,
    TrpqError,
    UnsupportedFeature,
    ValidationError,
)
from .evaluate import Algorithm, eval_bindings, eval_dispatch
from .expr import classify_fragment
from .generate import GenParams, gen_contact_graph
from .graph import BindingTuple, canonical_translation
from .parser import parse_match, parse_trpq

EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_FRAGMENT = 4
EXIT_RESOURCE = 5

BENCH_QUERIES = [
    (
        "q8",
        "MATCH (x:Person {test='pos'})-/PREV*/FWD/:visits/FWD/-(y:Room)",
    ),
    (
        "q1",
        "MATCH (x:Person {test='pos'})-/FWD/:meets/FWD/-(y:Person)",
    ),
]


def _parse_query(text: str, syntax: str):
    if syntax == "auto":
        syntax = "match" if text.lstrip().startswith("MATCH") else "formal"
    if syntax == "match":
        return parse_match(text)
    return parse_trpq(text)


def _print_table(rows, fmt, out):
    header = ["x", "x_time", "y", "y_time"]
    table = [[r.from_object, str(r.from_time), r.to_object, str(r.to_time)] for r in rows]
    if fmt == "table":
        widths = [
            max(len(h), *(len(row[i]) for row in table)) if table else len(h)
            for i, h in enumerate(header)
        ]
        out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
        for row in table:
            out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")
    else:
        out.write(",".join(header) + "\n")
        for row in table:
            out.write(",".join(row) + "\n")


def cmd_validate(args) -> int:
    load_bundle(args.bundle)
    print("ok")
    return 0


def cmd_query(args) -> int:
    t_start = time.perf_counter()
    g = load_bundle(args.bundle)
    e = _parse_query(args.query, args.syntax)
    fragment = classify_fragment(e)
    interval_ms = None
    if args.tuple:
        parts = args.tuple.split(",")
        if len(parts) != 4:
            raise QuerySyntaxError("tuple must be o1,t1,o2,t2", 0)
        try:
            bt = BindingTuple(parts[0], int(parts[1]), parts[2], int(parts[3]))
        except ValueError:
            raise QuerySyntaxError("tuple times must be integers", 0) from None
        result, stats = eval_dispatch(g, e, bt, Algorithm(args.algo))
        print("true" if result else "false")
        if stats.algorithm in ("pc", "anoi"):
            interval_ms = stats.wall_ms
        else:
            interval_ms = (time.perf_counter() - t_start) * 1000.0 - stats.wall_ms
        if args.stats:
            total_ms = (time.perf_counter() - t_start) * 1000.0
            sys.stderr.write(
                stats.format()
                + f"\ninterval_ms={interval_ms:.3f}\ntotal_ms={total_ms:.3f}\n"
            )
        return 0
    if args.algo not in ("auto", "full"):
        raise FragmentError(
            f"algorithm {args.algo} supports single-tuple mode only; "
            "use --tuple or --algo auto"
        )
    t_pre = time.perf_counter()
    rows = eval_bindings(g, e, threads=args.threads)
    _print_table(rows, args.format, sys.stdout)
    if args.stats:
        t_end = time.perf_counter()
        sys.stderr.write(
            "\n".join(
                [
                    "algorithm=bindings",
                    f"fragment={fragment.value}",
                    f"rows={len(rows)}",
                    f"interval_ms={(t_pre - t_start) * 1000.0:.3f}",
                    f"total_ms={(t_end - t_start) * 1000.0:.3f}",
                ]
            )
            + "\n"
        )
    return 0


def cmd_gen(args) -> int:
    params = GenParams(
        persons=args.persons,
        rooms=args.rooms,
        timepoints=args.timepoints,
        positivity_rate=args.positivity,
        highrisk_rate=args.highrisk,
        meet_locations=args.meet_locations,
        seed=args.seed,
    )
    g = gen_contact_graph(params)
    save_bundle(g, args.out)
    print(f"wrote {args.out}: {len(g.nodes)} nodes, {len(g.edges)} edges")
    return 0


def cmd_expand(args) -> int:
    g = load_bundle(args.bundle)
    tg = canonical_translation(g, cap=args.cap)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ex_lines = ["id,time"]
    ex_lines.extend(f"{o},{t}" for o, t in sorted(tg.xi))
    (out / "existence_points.csv").write_bytes(
        ("\n".join(ex_lines) + "\n").encode("utf-8")
    )
    prop_lines = ["id,prop,time,value"]
    prop_lines.extend(
        f"{o},{p},{t},{v}" for (o, p, t), v in sorted(tg.sigma.items())
    )
    (out / "properties_points.csv").write_bytes(
        ("\n".join(prop_lines) + "\n").encode("utf-8")
    )
    print(f"wrote {args.out}: {len(tg.xi)} existence points")
    return 0


def cmd_classify(args) -> int:
    e = _parse_query(args.query, args.syntax)
    print(classify_fragment(e).name)
    return 0


def cmd_bench(args) -> int:
    queries = list(BENCH_QUERIES)
    if args.query:
        queries = [("user", args.query)]
    parsed = [(qid, parse_match(q) if q.startswith("MATCH") else parse_trpq(q))
              for qid, q in queries]
    print("sweep,point,query,rows,wall_ms")
    for point, params, threads in _sweep_points(args):
        g = gen_contact_graph(params)
        for qid, e in parsed:
            start = time.perf_counter()
            rows = eval_bindings(g, e, threads=threads, cap=args.cap)
            ms = (time.perf_counter() - start) * 1000.0
            print(f"{args.sweep},{point},{qid},{len(rows)},{ms:.1f}")
    return 0


def _sweep_points(args):
    base = dict(
        persons=args.persons,
        rooms=args.rooms,
        timepoints=args.timepoints,
        positivity_rate=args.positivity,
        highrisk_rate=args.highrisk,
        meet_locations=args.meet_locations,
        seed=args.seed,
    )
    if args.sweep == "size":
        for persons in (250, 500, 1000, 2000):
            yield persons, GenParams(**{**base, "persons": persons}), args.threads
    elif args.sweep == "positivity":
        for pct in (2, 4, 6, 8, 10):
            yield pct, GenParams(**{**base, "positivity_rate": pct / 100}), args.threads
    elif args.sweep == "threads":
        for threads in (1, 2, 4):
            yield threads, GenParams(**base), threads
    elif args.sweep == "window":
        for tp in (12, 24, 36, 48):
            yield tp, GenParams(**{**base, "timepoints": tp}), args.threads
    else:
        raise ValueError(f"unknown sweep {args.sweep}")


def _add_gen_params(p, persons=500):
    p.add_argument("--persons", type=int, default=persons)
    p.add_argument("--rooms", type=int, default=25)
    p.add_argument("--timepoints", type=int, default=48)
    p.add_argument("--positivity", type=float, default=0.05)
    p.add_argument("--highrisk", type=float, default=0.18)
    p.add_argument("--meet-locations", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="trpq", description="Temporal regular path queries over graph bundles"
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a bundle")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="evaluate a query against a bundle")
    p.add_argument("bundle")
    p.add_argument("query")
    p.add_argument("--syntax", choices=("auto", "formal", "match"), default="auto")
    p.add_argument(
        "--algo", choices=("auto", "pc", "anoi", "full", "oracle"), default="auto"
    )
    p.add_argument("--tuple", help="single-tuple mode: o1,t1,o2,t2")
    p.add_argument("--format", choices=("table", "csv"), default="csv")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("gen", help="generate a synthetic contact-tracing bundle")
    p.add_argument("out")
    _add_gen_params(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("expand", help="expand a bundle to time points")
    p.add_argument("bundle")
    p.add_argument("out")
    p.add_argument("--cap", type=int, default=2 ** 20)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("classify", help="print the fragment of a query")
    p.add_argument("query")
    p.add_argument("--syntax", choices=("auto", "formal", "match"), default="auto")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bench", help="run a deterministic benchmark sweep")
    p.add_argument("--sweep", choices=("size", "positivity", "threads", "window"),
                   default="size")
    p.add_argument("--query", help="override the built-in query corpus")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--cap", type=int, default=2 ** 22)
    _add_gen_params(p)
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QuerySyntaxError, UnsupportedFeature, FormatError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except ValidationError as exc:
        sys.stderr.write(f"error: invalid graph: {exc}\n")
        return EXIT_VALIDATION
    except FragmentError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FRAGMENT
    except (ResourceLimit, DomainTooLarge) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    except TrpqError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
