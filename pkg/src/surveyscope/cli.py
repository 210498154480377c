"""Command-line entry points for every pipeline stage.

Exit codes: 0 ok, 1 domain failure (violations found / no papers remain),
2 usage error, 3 resource cap exceeded. Failures print one machine-parseable
JSON line to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .citations import DocumentText, graph_to_dot
from .compiler import CapacityError, compile_theory, to_nnf
from .constraints import ConstraintError, parse_constraints
from .ingest import ConfigError, CorpusError, TaxonomyError, parse_config, load_corpus, read_sheet
from .logic import TheoryError, build_theory, export_dimacs, validate_against, validate_papers
from .recommend import parse_preferences
from .service import ApiCore, ServiceState, network_payload, render_json, serve
from .snapshot import (
    DEFAULT_THRESHOLDS,
    Snapshot,
    atomic_write,
    load_snapshot,
    write_citations,
    write_snapshot,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3

_INPUT_ERRORS = (ConfigError, CorpusError, TaxonomyError, ConstraintError, TheoryError, ValueError)


def _fail(code: int, kind: str, detail: str) -> int:
    print(json.dumps({"error": kind, "detail": detail}), file=sys.stderr)
    return code


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _load_inputs(args) -> Snapshot:
    """Corpus + theory from --snapshot, or fresh from -c/-s/-x/-p files."""
    if getattr(args, "snapshot", None) and os.path.exists(
        os.path.join(args.snapshot, "corpus.json")
    ):
        return load_snapshot(args.snapshot)
    if not getattr(args, "config", None) or not getattr(args, "sheet", None):
        raise ValueError("need either --snapshot with corpus.json, or -c/--config and -s/--sheet")
    config = parse_config(_read(args.config))
    corpus = load_corpus(config, read_sheet(args.sheet))
    directives = (
        parse_constraints(_read(args.constraints)) if getattr(args, "constraints", None) else []
    )
    preferences = (
        parse_preferences(_read(args.preferences)) if getattr(args, "preferences", None) else []
    )
    return Snapshot(
        corpus=corpus,
        theory=build_theory(corpus, directives),
        preferences=preferences,
    )


def _load_texts(directory: str) -> list[DocumentText]:
    texts = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".txt"):
            continue
        stem = name[: -len(".txt")]
        try:
            paper_id = int(stem)
        except ValueError:
            raise ValueError(f"text file {name!r} is not named <paper_id>.txt") from None
        texts.append(
            DocumentText(paper_id=paper_id, body=_read(os.path.join(directory, name)))
        )
    return texts


def cmd_ingest(args) -> int:
    config = parse_config(_read(args.config))
    corpus = load_corpus(config, read_sheet(args.sheet))
    for line in corpus.diagnostics:
        print(f"warning: {line}", file=sys.stderr)
    directives = parse_constraints(_read(args.constraints)) if args.constraints else []
    preferences = parse_preferences(_read(args.preferences)) if args.preferences else []
    embeddings = None
    if args.embeddings:
        from .analytics import parse_embeddings

        embeddings = parse_embeddings(_read(args.embeddings))
    sources = {"config": args.config, "sheet": args.sheet}
    if args.constraints:
        sources["constraints"] = args.constraints
    write_snapshot(
        args.out,
        corpus,
        directives,
        preferences,
        embeddings=embeddings,
        sources=sources,
    )
    print(
        f"snapshot written to {args.out}: {len(corpus.papers)} papers, "
        f"{len(corpus.leaves)} leaf classes, {len(corpus.diagnostics)} warnings"
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    snap = _load_inputs(args)
    used_snapshot = bool(
        getattr(args, "snapshot", None)
        and os.path.exists(os.path.join(args.snapshot, "corpus.json"))
    )
    if args.constraints and used_snapshot:
        # fresh constraint file against a prebuilt snapshot corpus
        violations = validate_papers(snap.corpus, parse_constraints(_read(args.constraints)))
    else:
        violations = validate_against(snap.corpus, snap.theory)
    by_id = {p.id: p for p in snap.corpus.papers}
    if args.json:
        payload = {
            "violations": [
                {
                    "paper_id": v.paper_id,
                    "title": by_id[v.paper_id].title,
                    "clause": sorted(v.clause, key=lambda l: (abs(l), l)),
                    "source": v.describe(),
                }
                for v in violations
            ],
            "count": len(violations),
        }
        sys.stdout.write(render_json(payload).decode())
    else:
        if not violations:
            print("all papers consistent")
        for v in violations:
            title = by_id[v.paper_id].title
            print(f"paper {v.paper_id} ({title}): violates {v.describe()}")
    return EXIT_DOMAIN if violations else EXIT_OK


def cmd_count(args) -> int:
    snap = _load_inputs(args)
    state = ServiceState.from_snapshot(snap)
    payload = {
        "tag_count": len(state.theory.leaf_variables),
        "distinct_profiles": state.distinct_profiles,
        "unwritten_count": state.unwritten_count,
        "unwritten_count_str": str(state.unwritten_count),
    }
    if args.json:
        sys.stdout.write(render_json(payload).decode())
    else:
        print(f"tags (leaf classes):     {payload['tag_count']}")
        print(f"distinct known profiles: {payload['distinct_profiles']}")
        print(f"papers yet to be written: {payload['unwritten_count']}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    snap = _load_inputs(args)
    state = ServiceState.from_snapshot(snap)
    core = ApiCore(state, recommend_timeout=args.timeout)
    body: dict = {"k": args.k}
    if args.preferences:
        body["preferences"] = [
            line.strip()
            for line in _read(args.preferences).splitlines()
            if line.strip() and not line.strip().startswith("#")
        ]
    if args.focus:
        body["focus"] = args.focus
    status, payload = core.handle("POST", "/api/recommend", {}, body)
    if status != 200:
        code = EXIT_CAPACITY if payload.get("error") == "capacity" else EXIT_USAGE
        return _fail(code, payload.get("error", "error"), payload.get("detail", ""))
    if args.json:
        sys.stdout.write(render_json(payload).decode())
    else:
        recs = payload["recommendations"]
        if not recs:
            print("no papers remain")
        for i, rec in enumerate(recs, start=1):
            print(f"recommendation {i}:")
            for feature in rec["features"]:
                print(f"  + {feature}")
            if not rec["features"]:
                print("  (all nominal settings)")
            for neighbor in rec["neighbors"]:
                extend = ", ".join(neighbor["extend"]) or "-"
                relax = ", ".join(neighbor["relax"]) or "-"
                print(
                    f"  neighbor {neighbor['paper_id']} ({neighbor.get('title', '')}) "
                    f"distance {neighbor['distance']} | extend: {extend} | relax: {relax}"
                )
        if payload["exhausted"]:
            print("(solution space exhausted)")
    if payload["exhausted"] and not payload["recommendations"]:
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_citations(args) -> int:
    snap = _load_inputs(args)
    texts = _load_texts(args.texts)
    thresholds = args.threshold if args.threshold else [0.25]
    if args.snapshot and os.path.isdir(args.snapshot):
        graphs = write_citations(args.snapshot, snap.corpus, texts, thresholds)
    else:
        from .citations import build_graph

        graphs = {t: build_graph(snap.corpus, texts, t) for t in thresholds}
    primary = graphs[thresholds[0]]
    if args.dot:
        output = graph_to_dot(primary)
    else:
        output = render_json(network_payload(snap.corpus, primary)).decode()
    if args.out:
        atomic_write(args.out, output)
        print(f"citation graph written to {args.out}")
    else:
        sys.stdout.write(output)
    return EXIT_OK


def cmd_export(args) -> int:
    snap = _load_inputs(args)
    wrote = []
    if args.dimacs:
        atomic_write(args.dimacs, export_dimacs(snap.theory))
        wrote.append(args.dimacs)
    if args.nnf:
        graph = compile_theory(snap.theory)
        atomic_write(args.nnf, to_nnf(graph))
        wrote.append(args.nnf)
    if not wrote:
        raise ValueError("nothing to export: pass --dimacs and/or --nnf")
    print("wrote " + ", ".join(wrote))
    return EXIT_OK


def cmd_serve(args) -> int:
    serve(
        args.snapshot,
        port=args.port,
        recommend_timeout=args.recommend_timeout_secs,
        cors_origin=args.cors_origin,
        static_dir=args.static_dir,
    )
    return EXIT_OK


def _add_input_args(parser, with_constraints: bool = True) -> None:
    parser.add_argument("--snapshot", help="snapshot directory built by ingest")
    parser.add_argument("-c", "--config", help="survey config YAML")
    parser.add_argument("-s", "--sheet", help="spreadsheet CSV export")
    if with_constraints:
        parser.add_argument("-x", "--constraints", help="semantic constraint file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surveyscope",
        description="Explore a classified literature survey and find its gaps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse config + sheet into a snapshot directory")
    p.add_argument("-c", "--config", required=True)
    p.add_argument("-s", "--sheet", required=True)
    p.add_argument("-x", "--constraints")
    p.add_argument("-p", "--preferences")
    p.add_argument("--embeddings")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check documented papers against the constraints")
    _add_input_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("count", help="count the papers yet to be written")
    _add_input_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("recommend", help="generate unwritten-paper profiles")
    _add_input_args(p)
    p.add_argument("-k", type=int, default=1)
    p.add_argument("-p", "--preferences", help="preference file, one signed classpath per line")
    p.add_argument("--focus", action="append", help="signed classpath to enforce (repeatable)")
    p.add_argument("--timeout", type=float, default=60.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("citations", help="extract the citation graph from paper texts")
    _add_input_args(p, with_constraints=False)
    p.add_argument("--texts", required=True, help="directory of <paper_id>.txt files")
    p.add_argument(
        "--threshold",
        type=float,
        action="append",
        help=f"match threshold (repeatable; default 0.25, snapshot default {list(DEFAULT_THRESHOLDS)})",
    )
    p.add_argument("--dot", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_citations)

    p = sub.add_parser("export", help="write DIMACS CNF / NNF interop files")
    _add_input_args(p)
    p.add_argument("--dimacs")
    p.add_argument("--nnf")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP API on a snapshot")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--recommend-timeout-secs", type=float, default=60.0)
    p.add_argument("--cors-origin")
    p.add_argument("--static-dir")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        return _fail(EXIT_CAPACITY, "capacity", str(exc))
    except FileNotFoundError as exc:
        return _fail(EXIT_USAGE, "missing_file", str(exc))
    except _INPUT_ERRORS as exc:
        return _fail(EXIT_USAGE, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
