"""Command line entry point: ``hiddencrawl {crawl,sweep,gen,audit}``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import hard
from .core import ConfigurationError, ContractViolation
from .harness import (
    ALGORITHMS,
    IngestError,
    RunConfig,
    _parse_spec,
    ingest_csv,
    load_sweep_file,
    make_dataset,
    run,
    sweep,
    write_csv,
    write_sweep_csv,
)
from .server import read_query_log


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hiddencrawl", description="Crawl a simulated top-k hidden database.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("crawl", help="run one crawl and verify the reconstruction")
    _common(p)
    p.add_argument("--algorithm", required=True, choices=sorted(ALGORITHMS))
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="dataset CSV (needs --schema)")
    src.add_argument("--gen", help="generator spec, e.g. numeric-hard:k=4,d=2,m=5")
    p.add_argument("--schema", help="JSON schema declaration for --data")
    p.add_argument("--project", help="comma-separated attribute names to keep")
    p.add_argument("--sample", type=float, help="Bernoulli row-sampling probability")
    p.add_argument("--skip-validation", action="store_true", help="crawl even if a point holds more than k tuples")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--log", help="write the query log (JSON lines) here")
    p.add_argument("--curve", help="write the progressiveness curve (CSV) here")

    p = sub.add_parser("sweep", help="run every config in a sweep file")
    p.add_argument("config", help="JSON sweep file")
    p.add_argument("--out", required=True, help="CSV table of results")

    p = sub.add_parser("gen", help="write a generated dataset as CSV plus schema JSON")
    p.add_argument("spec", help="generator spec, e.g. categorical-hard:k=3,U=4")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="dataset CSV path")
    p.add_argument("--schema", help="schema JSON path (default: <out>.schema.json)")

    p = sub.add_parser("audit", help="lower-bound coverage audit of a saved query log")
    p.add_argument("log", help="query log (JSON lines)")
    p.add_argument("--gen", required=True, help="numeric-hard:k=..,d=..,m=.. or categorical-hard:k=..,U=..")
    return parser


def _cmd_crawl(args) -> int:
    cfg = RunConfig(
        algorithm=args.algorithm,
        k=args.k,
        seed=args.seed,
        data=args.data,
        schema=args.schema,
        generator=args.gen,
        project=args.project.split(",") if args.project else None,
        sample=args.sample,
        skip_validation=args.skip_validation,
        out=args.out,
        log_out=args.log,
        curve_out=args.curve,
    )
    report = run(cfg)
    print(json.dumps(report.to_json(curve=False), indent=2))
    return 0 if report.reconstruction_verified else 1


def _cmd_sweep(args) -> int:
    reports = sweep(load_sweep_file(args.config))
    write_sweep_csv(reports, args.out)
    for r in reports:
        status = "ok" if r.reconstruction_verified else f"FAILED ({r.error})"
        print(f"{r.algorithm:>16} k={r.k:<5} d={r.d} n={r.n:<7} cost={r.total_queries:<7} {status}")
    return 0 if all(r.reconstruction_verified for r in reports) else 1


def _cmd_gen(args) -> int:
    ds = make_dataset(args.spec, seed=args.seed)
    schema_path = args.schema or f"{args.out}.schema.json"
    write_csv(ds, args.out, schema_path)
    # round trip so the written files are known to load
    ingest_csv(args.out, schema_path)
    print(f"wrote {ds.n} tuples to {args.out} (schema {schema_path})")
    return 0


def _cmd_audit(args) -> int:
    with open(args.log) as fp:
        entries = read_query_log(fp)
    name, p = _parse_spec(args.gen)
    if name == "numeric-hard":
        params = hard.NumericHardParams(p["k"], p["d"], p["m"])
        result = hard.audit_numeric_coverage(entries, params)
        floor = hard.numeric_floor(params)
        print(f"queries: {len(entries)}  floor d*m: {floor}  meets floor: {len(entries) >= floor}")
    elif name == "categorical-hard":
        ds = make_dataset(args.gen)
        result = hard.audit_categorical_coverage(entries, ds.schema)
        print(f"queries: {len(entries)}")
    else:
        raise ConfigurationError(f"no audit for generator {name!r}")
    print(f"uncovered points: {len(result.uncovered)}")
    for pt in result.uncovered[:10]:
        print(f"  {pt}")
    print(f"resolved queries covering several audited points: {len(result.shared)}")
    for idx, pts in result.shared[:10]:
        print(f"  query #{idx}: {pts}")
    return 0 if result.ok else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    handlers = {"crawl": _cmd_crawl, "sweep": _cmd_sweep, "gen": _cmd_gen, "audit": _cmd_audit}
    try:
        return handlers[args.command](args)
    except (ConfigurationError, ContractViolation, IngestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
