"""Snapshot directory: the hand-off artifact between batch and serve modes.

Layout (all plain JSON so every stage stays inspectable):

    corpus.json        papers, taxonomies, membership
    theory.json        variables and clauses with provenance
    citations-<t>.json one citation graph per precomputed threshold
    projections.json   tag-space and affinity 2D projections
    meta.json          build info, preferences, threshold list
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .analytics import affinity_coordinates, project_tags
from .citations import (
    CitationGraph,
    DocumentText,
    build_graph,
    graph_from_dict,
    graph_to_dict,
)
from .constraints import ClassTerm, ConstraintDirective, parse_term
from .ingest.corpus import SurveyCorpus, corpus_from_dict, corpus_to_dict
from .logic import CnfTheory, build_theory, theory_from_dict, theory_to_dict

DEFAULT_THRESHOLDS = (0.15, 0.25, 0.35)


def atomic_write(path: str, text: str) -> None:
    """Write via temp file + rename so partial outputs are never left behind."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _dump(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


@dataclass
class Snapshot:
    corpus: SurveyCorpus
    theory: CnfTheory
    preferences: list[ClassTerm] = field(default_factory=list)
    citations: dict[float, CitationGraph] = field(default_factory=dict)
    projections: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)


def build_projections(corpus: SurveyCorpus, embeddings: dict[int, list[float]] | None) -> dict:
    empty = {"points": [], "degenerate": True}
    try:
        tags = project_tags(corpus).to_dict()
    except ValueError:
        tags = dict(empty)
    try:
        affinity = affinity_coordinates(corpus, embeddings).to_dict()
    except ValueError:
        affinity = dict(empty)
    return {"tags": tags, "affinity": affinity}


def write_snapshot(
    out_dir: str,
    corpus: SurveyCorpus,
    directives: list[ConstraintDirective] | None = None,
    preferences: list[ClassTerm] | None = None,
    embeddings: dict[int, list[float]] | None = None,
    sources: dict[str, str] | None = None,
) -> None:
    """Write corpus/theory/projections/meta; citation graphs are added
    separately by write_citations (they need the document texts)."""
    theory = build_theory(corpus, directives or [])
    os.makedirs(out_dir, exist_ok=True)
    atomic_write(os.path.join(out_dir, "corpus.json"), _dump(corpus_to_dict(corpus)))
    atomic_write(os.path.join(out_dir, "theory.json"), _dump(theory_to_dict(theory)))
    atomic_write(
        os.path.join(out_dir, "projections.json"),
        _dump(build_projections(corpus, embeddings)),
    )
    meta = {
        "built_at": datetime.now(timezone.utc).isoformat(),
        "sources": {
            label: {"path": path, "sha256": _digest(path)}
            for label, path in (sources or {}).items()
        },
        "preferences": [str(t) for t in (preferences or [])],
        "title_text": corpus.title_text,
        "thresholds": [],
    }
    existing = _read_meta_thresholds(out_dir)
    if existing:
        meta["thresholds"] = existing
    atomic_write(os.path.join(out_dir, "meta.json"), _dump(meta))


def _read_meta_thresholds(out_dir: str) -> list[float]:
    path = os.path.join(out_dir, "meta.json")
    if not os.path.exists(path):
        return []
    with open(path, encoding="utf-8") as handle:
        return json.load(handle).get("thresholds", [])


def write_citations(
    out_dir: str,
    corpus: SurveyCorpus,
    texts: list[DocumentText],
    thresholds=DEFAULT_THRESHOLDS,
) -> dict[float, CitationGraph]:
    graphs: dict[float, CitationGraph] = {}
    for threshold in thresholds:
        graph = build_graph(corpus, texts, threshold)
        graphs[threshold] = graph
        atomic_write(
            os.path.join(out_dir, f"citations-{threshold}.json"),
            _dump(graph_to_dict(graph)),
        )
    meta_path = os.path.join(out_dir, "meta.json")
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as handle:
            meta = json.load(handle)
        meta["thresholds"] = sorted(set(meta.get("thresholds", [])) | set(thresholds))
        atomic_write(meta_path, _dump(meta))
    return graphs


def load_snapshot(snapshot_dir: str) -> Snapshot:
    def read(name: str) -> dict:
        with open(os.path.join(snapshot_dir, name), encoding="utf-8") as handle:
            return json.load(handle)

    corpus = corpus_from_dict(read("corpus.json"))
    theory = theory_from_dict(read("theory.json"))
    meta = read("meta.json") if os.path.exists(os.path.join(snapshot_dir, "meta.json")) else {}
    projections = (
        read("projections.json")
        if os.path.exists(os.path.join(snapshot_dir, "projections.json"))
        else {}
    )
    citations: dict[float, CitationGraph] = {}
    for threshold in meta.get("thresholds", []):
        path = os.path.join(snapshot_dir, f"citations-{threshold}.json")
        if os.path.exists(path):
            citations[float(threshold)] = graph_from_dict(read(f"citations-{threshold}.json"))
    preferences = [parse_term(t) for t in meta.get("preferences", [])]
    return Snapshot(
        corpus=corpus,
        theory=theory,
        preferences=preferences,
        citations=citations,
        projections=projections,
        meta=meta,
    )
