"""Operator command line: ingest, query, eval, serve.

Exit codes: 0 success, 1 partial or data failure, 2 usage or environment
failure. The db directory comes from --db or the PIR_DB environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bilist import SketchQuery, bilist_from_dict
from .engine import Engine, annotation_from_dict
from .errors import ConfigurationError, PirError
from .evaluation import (
    DEFAULT_THRESHOLDS,
    default_spec,
    generate_corpus,
    render_csv,
    render_text,
    spec_from_dict,
    sweep,
)
from . import service as service_mod

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_USAGE = 2


def _db_dir(args, parser, required=True) -> Path | None:
    db = args.db or os.environ.get("PIR_DB")
    if db is None:
        if required:
            parser.error("--db DIR (or PIR_DB) is required")
        return None
    return Path(db)


def cmd_ingest(args, parser) -> int:
    db = _db_dir(args, parser)
    try:
        engine = Engine(db_dir=db)
    except PirError as exc:
        print(f"error: cannot open db {db}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failures = 0
    for file_name in args.files:
        path = Path(file_name)
        try:
            doc = json.loads(path.read_text())
            annotation = annotation_from_dict(doc, base_dir=path.parent)
            record_id = engine.insert_image(annotation)
            print(f"{path}: {record_id}")
        except (OSError, json.JSONDecodeError, PirError) as exc:
            failures += 1
            print(f"{path}: error: {exc}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_query(args, parser) -> int:
    if bool(args.sketch) == bool(args.image_id):
        parser.error("exactly one of --sketch FILE or --image-id ID is required")
    db = _db_dir(args, parser)
    try:
        engine = Engine(db_dir=db)
    except PirError as exc:
        print(f"error: cannot open db {db}: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.sketch:
            doc = json.loads(Path(args.sketch).read_text())
            query = SketchQuery(
                bilist=bilist_from_dict(doc),
                threshold=args.threshold,
                invariant_mode=args.invariant,
                limit=args.limit,
            )
            results = engine.query_sketch(query)
        else:
            results = engine.query_by_image(
                args.image_id,
                threshold=args.threshold,
                invariant=args.invariant,
                limit=args.limit,
            )
    except (OSError, json.JSONDecodeError, PirError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL

    for r in results:
        names = ",".join(r.matched)
        print(f"{r.image_id}  {r.similarity:5.1f}%  {names}")
    return EXIT_OK


def cmd_eval(args, parser) -> int:
    try:
        if args.spec:
            doc = json.loads(Path(args.spec).read_text())
            spec = spec_from_dict(doc)
            if args.seed is not None:
                spec = type(spec)(
                    seed=args.seed,
                    categories=spec.categories,
                    distractors_per_category=spec.distractors_per_category,
                    unrelated=spec.unrelated,
                )
        else:
            spec = default_spec(seed=args.seed if args.seed is not None else 20)
        thresholds = tuple(int(t) for t in args.thresholds.split(","))
        if any(not (0 <= t <= 100) for t in thresholds):
            raise ConfigurationError(f"thresholds must lie in [0, 100]: {thresholds}")
    except (OSError, json.JSONDecodeError, KeyError, ValueError, PirError) as exc:
        print(f"error: bad corpus spec: {exc}", file=sys.stderr)
        return EXIT_USAGE

    items = generate_corpus(spec)
    table = sweep(items, spec, thresholds=thresholds)
    print(render_text(table), end="")
    if args.csv:
        Path(args.csv).write_text(render_csv(table))
        print(f"csv written to {args.csv}")
    else:
        print()
        print(render_csv(table), end="")
    return EXIT_OK


def cmd_serve(args, parser) -> int:
    db = _db_dir(args, parser)
    try:
        engine = Engine(db_dir=db)
    except PirError as exc:
        print(f"error: cannot open db {db}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    static_dir = Path(args.ui) if args.ui else None
    try:
        server = service_mod.make_server(engine, host=args.host, port=args.port, static_dir=static_dir)
    except OSError as exc:
        print(f"error: cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"serving on http://{args.host}:{args.port}/ (db: {db})")
    service_mod.serve_forever(server)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pirsearch",
        description="Content-based image retrieval over qualitative spatial relations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="insert annotation files into the catalog")
    p_ingest.add_argument("files", nargs="+", help="annotation JSON files")
    p_ingest.add_argument("--db", help="catalog directory (or set PIR_DB)")
    p_ingest.set_defaults(func=cmd_ingest)

    p_query = sub.add_parser("query", help="run a sketch- or image-based query")
    p_query.add_argument("--sketch", help="sketch bi-list document (JSON file)")
    p_query.add_argument("--image-id", help="query by stored image id")
    p_query.add_argument("--threshold", type=int, default=0, help="similarity threshold 0-100")
    p_query.add_argument("--invariant", action="store_true", help="score up to rotation/reflection")
    p_query.add_argument("--limit", type=int, default=50)
    p_query.add_argument("--db", help="catalog directory (or set PIR_DB)")
    p_query.set_defaults(func=cmd_query)

    p_eval = sub.add_parser("eval", help="recall/precision sweep on a generated corpus")
    group = p_eval.add_mutually_exclusive_group()
    group.add_argument("--spec", help="corpus spec JSON file")
    group.add_argument("--default-corpus", action="store_true", help="use the built-in corpus")
    p_eval.add_argument(
        "--thresholds",
        default=",".join(str(t) for t in DEFAULT_THRESHOLDS),
        help="comma-separated threshold sweep",
    )
    p_eval.add_argument("--seed", type=int, default=None)
    p_eval.add_argument("--csv", help="also write the table as CSV to this file")
    p_eval.add_argument("--db-less", action="store_true", help="(default) run without a catalog")
    p_eval.set_defaults(func=cmd_eval)

    p_serve = sub.add_parser("serve", help="run the HTTP API and UI")
    p_serve.add_argument("--db", help="catalog directory (or set PIR_DB)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--ui", help="static UI bundle directory", default=None)
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
