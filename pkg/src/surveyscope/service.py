"""HTTP service exposing the survey views as a JSON API.

Every endpoint is a pure function of (snapshot state, request): identical
requests produce byte-identical bodies. The request core is separated from
the HTTP plumbing so it can be exercised directly in tests and by the CLI
(single source of truth for CLI/API equivalence).
"""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .analytics import class_stats, filter_papers, timeline_series
from .citations import CitationGraph, graph_to_dict
from .compiler import CapacityError, compile_theory, count_models
from .constraints import ClassTerm, parse_term
from .ingest.corpus import SurveyCorpus
from .ingest.taxonomy import TaxonomyNode
from .logic import CnfTheory, validate_against
from .recommend import recommend
from .snapshot import Snapshot, load_snapshot

DEFAULT_RECOMMEND_TIMEOUT = 60.0
DEFAULT_RECOMMEND_WORKERS = 2


class BadRequest(ValueError):
    def __init__(self, field_name: str, detail: str):
        super().__init__(detail)
        self.field = field_name
        self.detail = detail


@dataclass
class ServiceState:
    """Immutable request-serving snapshot; swapped atomically on reload."""

    corpus: SurveyCorpus
    theory: CnfTheory
    preferences: list[ClassTerm]
    citations: dict[float, CitationGraph]
    projections: dict
    meta: dict
    stats: dict = field(default_factory=dict)
    unwritten_count: int = 0
    distinct_profiles: int = 0

    @classmethod
    def from_snapshot(cls, snap: Snapshot) -> "ServiceState":
        base_graph = compile_theory(snap.theory)
        return cls(
            corpus=snap.corpus,
            theory=snap.theory,
            preferences=snap.preferences,
            citations=snap.citations,
            projections=snap.projections,
            meta=snap.meta,
            stats=class_stats(snap.corpus),
            unwritten_count=count_models(base_graph),
            distinct_profiles=len(snap.theory.blocking),
        )


def _paper_dict(state: ServiceState, paper) -> dict:
    index = next(i for i, p in enumerate(state.corpus.papers) if p.id == paper.id)
    tags = [
        leaf.classpath
        for leaf, marked in zip(state.corpus.leaves, state.corpus.membership[index])
        if marked
    ]
    return {
        "id": paper.id,
        "title": paper.title,
        "authors": paper.authors,
        "venue": paper.venue,
        "year": paper.year,
        "abstract": paper.abstract,
        "tags": tags,
    }


def _int_param(query: dict, name: str) -> int | None:
    values = query.get(name)
    if not values or values[-1] == "":
        return None
    try:
        return int(values[-1])
    except ValueError:
        raise BadRequest(name, f"{name} must be an integer, got {values[-1]!r}") from None


def _filters_from_query(query: dict) -> dict:
    terms = query.get("q", [""])[-1].split() or None
    mode = query.get("mode", ["all"])[-1]
    if mode not in ("all", "any"):
        raise BadRequest("mode", f"mode must be 'all' or 'any', got {mode!r}")
    year_min = _int_param(query, "year_min")
    year_max = _int_param(query, "year_max")
    if year_min is not None and year_max is not None and year_min > year_max:
        raise BadRequest("year_min", f"year_min {year_min} > year_max {year_max}")
    tags = [t for t in query.get("tags", []) if t] or None
    return {
        "terms": terms,
        "mode": mode,
        "year_min": year_min,
        "year_max": year_max,
        "tags": tags,
    }


def network_payload(corpus: SurveyCorpus, graph: CitationGraph) -> dict:
    """Citation graph JSON with node metadata; shared by the API and the
    CLI so the two emit identical bodies."""
    payload = graph_to_dict(graph)
    by_id = {p.id: p for p in corpus.papers}
    in_degree: dict[int, int] = {}
    for edge in graph.edges:
        in_degree[edge.target] = in_degree.get(edge.target, 0) + 1
    payload["nodes"] = [
        {
            "id": node,
            "title": by_id[node].title,
            "year": by_id[node].year,
            "in_degree": in_degree.get(node, 0),
        }
        for node in graph.nodes
    ]
    return payload


class ApiCore:
    """Pure dispatch of API requests against an immutable ServiceState."""

    def __init__(
        self,
        state: ServiceState,
        recommend_timeout: float = DEFAULT_RECOMMEND_TIMEOUT,
        recommend_workers: int = DEFAULT_RECOMMEND_WORKERS,
    ):
        self.state = state
        self.recommend_timeout = recommend_timeout
        self._recommend_slots = threading.BoundedSemaphore(recommend_workers)

    def handle(self, method: str, path: str, query: dict, body: dict | None):
        """Returns (status, payload). Unknown routes -> 404 envelope."""
        try:
            route = (method, path)
            if route == ("GET", "/api/survey"):
                return 200, self.survey()
            if route == ("GET", "/api/papers"):
                return 200, self.papers(query)
            if route == ("GET", "/api/taxonomy"):
                return 200, self.taxonomy(query)
            if route == ("GET", "/api/treemap"):
                return 200, self.treemap(query)
            if route == ("GET", "/api/network"):
                return 200, self.network(query)
            if route == ("GET", "/api/affinity"):
                return 200, self.affinity()
            if route == ("GET", "/api/insights"):
                return 200, self.insights()
            if route == ("GET", "/api/timeline"):
                return 200, self.timeline(query)
            if route == ("POST", "/api/validate"):
                return 200, self.validate()
            if route == ("POST", "/api/recommend"):
                return 200, self.recommend(body or {})
            return 404, {"error": "not_found", "detail": f"no route {method} {path}"}
        except BadRequest as exc:
            return 400, {"error": "bad_request", "field": exc.field, "detail": exc.detail}
        except CapacityError as exc:
            return 503, {"error": "capacity", "detail": str(exc)}

    def survey(self) -> dict:
        state = self.state
        return {
            "title_text": state.corpus.title_text,
            "paper_count": len(state.corpus.papers),
            "tag_count": len(state.theory.leaf_variables),
            "taxonomies": [t.name for t in state.corpus.taxonomies],
            "thresholds": sorted(state.citations),
        }

    def papers(self, query: dict) -> dict:
        filters = _filters_from_query(query)
        ids = filter_papers(self.state.corpus, **filters)
        by_id = {p.id: p for p in self.state.corpus.papers}
        return {
            "papers": [_paper_dict(self.state, by_id[i]) for i in ids],
            "count": len(ids),
        }

    def _taxonomy_named(self, query: dict):
        names = [t.name for t in self.state.corpus.taxonomies]
        wanted = query.get("name", [""])[-1] or query.get("taxonomy", [""])[-1]
        if not wanted or wanted == "default":
            return self.state.corpus.default_taxonomy
        for tax in self.state.corpus.taxonomies:
            if tax.name == wanted:
                return tax
        raise BadRequest("name", f"unknown taxonomy {wanted!r}; have {names}")

    def _node_dict(self, node: TaxonomyNode, with_stats: bool) -> dict:
        entry: dict = {
            "label": node.label,
            "classpath": node.classpath,
            "is_leaf": node.is_leaf,
            "children": [self._node_dict(c, with_stats) for c in node.children],
        }
        stats = self.state.stats.get(node.classpath) if with_stats else None
        if stats is not None:
            entry.update(
                {
                    "paper_count": stats.paper_count,
                    "papers": list(stats.papers),
                    "first_year": stats.first_year,
                    "last_year": stats.last_year,
                    "gap": stats.is_gap,
                }
            )
        return entry

    def taxonomy(self, query: dict) -> dict:
        tax = self._taxonomy_named(query)
        with_stats = tax.default  # membership only covers the default taxonomy
        return {
            "name": tax.name,
            "default": tax.default,
            "root": self._node_dict(tax.root, with_stats),
        }

    def treemap(self, query: dict) -> dict:
        tax = self._taxonomy_named(query)
        level = _int_param(query, "level")
        if level is None:
            level = 1
        if level < 1:
            raise BadRequest("level", f"level must be >= 1, got {level}")
        nodes = [
            node
            for node in tax.root.iter_nodes()
            if len(node.path) == level
        ]
        cells = []
        for node in nodes:
            stats = self.state.stats.get(node.classpath)
            cells.append(
                {
                    "classpath": node.classpath,
                    "label": node.label,
                    "count": stats.paper_count if stats else 0,
                    "gap": stats.is_gap if stats else True,
                    "is_leaf": node.is_leaf,
                }
            )
        return {"taxonomy": tax.name, "level": level, "cells": cells}

    def network(self, query: dict) -> dict:
        available = sorted(self.state.citations)
        raw = query.get("threshold", [""])[-1]
        if not raw:
            if not available:
                raise BadRequest("threshold", "no citation graphs precomputed")
            threshold = available[len(available) // 2]
        else:
            try:
                threshold = float(raw)
            except ValueError:
                raise BadRequest("threshold", f"threshold must be a number, got {raw!r}") from None
            if threshold not in self.state.citations:
                raise BadRequest(
                    "threshold", f"threshold {threshold} not precomputed; have {available}"
                )
        return network_payload(self.state.corpus, self.state.citations[threshold])

    def affinity(self) -> dict:
        tags = {}
        for i, paper in enumerate(self.state.corpus.papers):
            tags[str(paper.id)] = [
                leaf.classpath
                for leaf, marked in zip(self.state.corpus.leaves, self.state.corpus.membership[i])
                if marked
            ]
        projection = self.state.projections.get("affinity", {"points": [], "degenerate": True})
        return {"points": projection["points"], "degenerate": projection["degenerate"], "tags": tags}

    def insights(self) -> dict:
        state = self.state
        ranked = sorted(
            (s for s in state.stats.values() if s.is_leaf),
            key=lambda s: (-s.paper_count, s.classpath),
        )
        gaps = sorted(s.classpath for s in state.stats.values() if s.is_gap)
        tag_projection = state.projections.get("tags", {"points": []})
        return {
            "map_points": tag_projection["points"],
            "most_popular": [
                {"classpath": s.classpath, "count": s.paper_count} for s in ranked[:5]
            ],
            "least_popular": [
                {"classpath": s.classpath, "count": s.paper_count} for s in ranked[-5:]
            ],
            "gaps": gaps,
            "tag_count": len(state.theory.leaf_variables),
            "distinct_profiles": state.distinct_profiles,
            "unwritten_count": state.unwritten_count,
            "unwritten_count_str": str(state.unwritten_count),
        }

    def timeline(self, query: dict) -> dict:
        filters = _filters_from_query(query)
        return timeline_series(self.state.corpus, **filters).to_dict()

    def validate(self) -> dict:
        violations = validate_against(self.state.corpus, self.state.theory)
        by_id = {p.id: p for p in self.state.corpus.papers}
        return {
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

    def recommend(self, body: dict) -> dict:
        k = body.get("k", 1)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise BadRequest("k", f"k must be a positive integer, got {k!r}")
        try:
            preferences = (
                [parse_term(t) for t in body["preferences"]]
                if body.get("preferences") is not None
                else (self.state.preferences or None)
            )
            focus = [parse_term(t) for t in body.get("focus") or []]
        except ValueError as exc:
            raise BadRequest("preferences", str(exc)) from None
        deadline = time.monotonic() + self.recommend_timeout
        with self._recommend_slots:
            try:
                result = recommend(
                    self.state.theory,
                    preferences=preferences,
                    k=k,
                    focus=focus or None,
                    corpus=self.state.corpus,
                    deadline=deadline,
                )
            except ValueError as exc:
                raise BadRequest("focus", str(exc)) from None
        payload = result.to_dict()
        by_id = {p.id: p for p in self.state.corpus.papers}
        for entry in payload["recommendations"]:
            for neighbor in entry["neighbors"]:
                paper = by_id.get(neighbor["paper_id"])
                if paper is not None:
                    neighbor["title"] = paper.title
                    neighbor["year"] = paper.year
        payload["positions"] = self._project_profiles(
            [tuple(bool(b) for b in entry["profile"]) for entry in payload["recommendations"]]
        )
        return payload

    def _project_profiles(self, profiles: list[tuple[bool, ...]]) -> list[dict]:
        if not profiles:
            return []
        try:
            from .analytics import project_tags

            projection = project_tags(self.state.corpus, extra_profiles=profiles)
        except ValueError:
            return [{"x": 0.0, "y": 0.0} for _ in profiles]
        extras = [p for p in projection.points if p.paper_id is None]
        return [{"x": p.x, "y": p.y} for p in extras]


def render_json(payload: dict) -> bytes:
    return (json.dumps(payload, sort_keys=True) + "\n").encode("utf-8")


def make_handler(core: ApiCore, static_dir: str | None, cors_origin: str | None):
    if static_dir is not None:
        static_dir = os.path.abspath(static_dir)

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status: int, body: bytes, content_type: str = "application/json"):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            if cors_origin:
                self.send_header("Access-Control-Allow-Origin", cors_origin)
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(body)

        def _dispatch(self, method: str, body: dict | None):
            parsed = urlparse(self.path)
            if parsed.path == "/api" or parsed.path.startswith("/api/"):
                query = parse_qs(parsed.query, keep_blank_values=True)
                status, payload = core.handle(method, parsed.path, query, body)
                self._send(status, render_json(payload))
            elif method == "GET" and static_dir:
                self._static(parsed.path)
            else:
                self._send(404, render_json({"error": "not_found", "detail": self.path}))

        def _static(self, path: str):
            rel = path.lstrip("/") or "index.html"
            full = os.path.normpath(os.path.join(static_dir, rel))
            if not full.startswith(static_dir + os.sep) and full != static_dir:
                self._send(404, render_json({"error": "not_found", "detail": path}))
                return
            if os.path.isdir(full):
                full = os.path.join(full, "index.html")
            if not os.path.isfile(full):
                # single-page app fallback
                full = os.path.join(static_dir, "index.html")
                if not os.path.isfile(full):
                    self._send(404, render_json({"error": "not_found", "detail": path}))
                    return
            content_types = {
                ".html": "text/html",
                ".js": "application/javascript",
                ".css": "text/css",
                ".json": "application/json",
                ".svg": "image/svg+xml",
                ".png": "image/png",
                ".ico": "image/x-icon",
            }
            ext = os.path.splitext(full)[1]
            with open(full, "rb") as handle:
                self._send(200, handle.read(), content_types.get(ext, "application/octet-stream"))

        def do_GET(self):
            self._dispatch("GET", None)

        def do_OPTIONS(self):
            self._send(204, b"")

        def do_POST(self):
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            try:
                body = json.loads(raw) if raw else {}
            except json.JSONDecodeError:
                self._send(
                    400,
                    render_json(
                        {"error": "bad_request", "field": "body", "detail": "invalid JSON body"}
                    ),
                )
                return
            self._dispatch("POST", body)

    return Handler


def create_server(
    snapshot_dir: str,
    port: int = 8080,
    recommend_timeout: float = DEFAULT_RECOMMEND_TIMEOUT,
    cors_origin: str | None = None,
    static_dir: str | None = None,
    recommend_workers: int = DEFAULT_RECOMMEND_WORKERS,
) -> ThreadingHTTPServer:
    snap = load_snapshot(snapshot_dir)
    state = ServiceState.from_snapshot(snap)
    core = ApiCore(state, recommend_timeout, recommend_workers)
    if static_dir is None:
        bundled = os.path.join(snapshot_dir, "ui")
        static_dir = bundled if os.path.isdir(bundled) else None
    handler = make_handler(core, static_dir, cors_origin)
    server = ThreadingHTTPServer(("", port), handler)
    server.api_core = core  # type: ignore[attr-defined]
    return server


def serve(snapshot_dir: str, port: int = 8080, **kwargs) -> None:
    server = create_server(snapshot_dir, port, **kwargs)
    host = f"http://localhost:{server.server_address[1]}"
    print(f"serving survey API on {host}/api (snapshot: {snapshot_dir})")
    try:
        server.serve_forever()
    finally:
        server.server_close()
