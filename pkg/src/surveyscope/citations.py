"""Citation network extraction by fuzzy-matching reference strings.

Input is pre-extracted plain text, one document per known paper. The
reference section is located by its heading, segmented into individual
reference strings, and each string is scored against every other paper's
title with a normalized sliding-window edit distance: the fraction of the
title that would have to change for the best-aligned window of the
reference to become the title. 0.0 means the title appears verbatim.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

REFERENCE_HEADINGS = ("references", "bibliography", "literature cited")

_BRACKET_MARKER = re.compile(r"\[(\d+)\]")
_NUMBERED_LINE = re.compile(r"^\s*(\d+)\.\s")
_MIN_REFERENCE_CHARS = 20


@dataclass(frozen=True)
class DocumentText:
    paper_id: int
    body: str


@dataclass(frozen=True)
class CitationEdge:
    source: int  # citing paper id
    target: int  # cited paper id
    score: float
    matched_span: str


@dataclass(frozen=True)
class CitationGraph:
    threshold: float
    nodes: tuple[int, ...]  # all paper ids, cited or not
    edges: tuple[CitationEdge, ...]


@dataclass(frozen=True)
class ReferenceSection:
    text: str
    heading_found: bool


def locate_references(body: str) -> ReferenceSection:
    """Text after the last reference-section heading line; the whole body
    with heading_found=False when no heading exists."""
    lines = body.splitlines(keepends=True)
    offset = 0
    cut: int | None = None
    for line in lines:
        stripped = line.strip().lower().rstrip(":")
        if stripped in REFERENCE_HEADINGS:
            cut = offset + len(line)
        offset += len(line)
    if cut is None:
        return ReferenceSection(text=body, heading_found=False)
    return ReferenceSection(text=body[cut:], heading_found=True)


def split_references(section: str) -> list[str]:
    """Individual reference strings: bracketed [n] markers when at least
    three appear in ascending order, else 'n.' numbered lines, else blank
    line separation. Fragments under 20 characters are dropped."""
    markers = list(_BRACKET_MARKER.finditer(section))
    numbers = [int(m.group(1)) for m in markers]
    if len(markers) >= 3 and all(a < b for a, b in zip(numbers, numbers[1:])):
        starts = [m.start() for m in markers]
        pieces = [
            section[start:end] for start, end in zip(starts, starts[1:] + [len(section)])
        ]
    elif any(_NUMBERED_LINE.match(line) for line in section.splitlines()):
        pieces = []
        buffer: list[str] = []
        for line in section.splitlines():
            if _NUMBERED_LINE.match(line):
                if buffer:
                    pieces.append(" ".join(buffer))
                buffer = [line.strip()]
            elif buffer:
                buffer.append(line.strip())
        if buffer:
            pieces.append(" ".join(buffer))
    else:
        pieces = re.split(r"\n\s*\n", section)
    cleaned = [" ".join(p.split()) for p in pieces]
    return [p for p in cleaned if len(p) >= _MIN_REFERENCE_CHARS]


def normalize(text: str) -> str:
    """Lowercase, strip punctuation, collapse whitespace."""
    lowered = text.lower()
    stripped = re.sub(r"[^0-9a-z\s]", " ", lowered)
    return " ".join(stripped.split())


def levenshtein(a: str, b: str, cap: int | None = None) -> int:
    """Edit distance; with a cap, any true distance above it comes back as
    cap + 1 (rows whose minimum exceeds the cap cannot recover)."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        append = current.append
        for j, cb in enumerate(b, start=1):
            append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        if cap is not None and min(current) > cap:
            return cap + 1
        previous = current
    return previous[len(b)]


def match_window(
    reference: str, title: str, cap: float | None = None
) -> tuple[float, str]:
    """Best normalized edit fraction over title-length windows of the
    reference, windows anchored at token starts. Returns (score, window).

    With a cap, scores above it are only guaranteed to come back > cap;
    anything at or below the cap is exact."""
    ref = normalize(reference)
    tit = normalize(title)
    if not tit:
        return 1.0, ""
    # +1 absorbs float truncation so boundary scores stay exact
    bound = None if cap is None else int(cap * len(tit)) + 1
    if len(ref) <= len(tit):
        return levenshtein(ref, tit, bound) / len(tit), ref
    token_starts = [0] + [m.end() for m in re.finditer(r" ", ref)]
    best = len(tit) + 1
    best_window = ""
    for start in token_starts:
        window = ref[start : start + len(tit)]
        limit = best - 1 if bound is None else min(best - 1, bound)
        distance = levenshtein(window, tit, limit)
        if distance < best:
            best = distance
            best_window = window
            if best == 0:
                break
    if not best_window:  # every window pruned; report the first as evidence
        best_window = ref[token_starts[0] : len(tit)]
        best = min(best, len(tit))
    return best / len(tit), best_window


def match_score(reference: str, title: str) -> float:
    """Fraction of the title that must change to match the reference's best
    window; 0.0 means exact containment."""
    return match_window(reference, title)[0]


def build_graph(
    corpus, texts: list[DocumentText], threshold: float
) -> CitationGraph:
    """Directed citation edges: for each reference string in each document,
    score against every other paper's title and keep the best-scoring paper
    when its score is within the threshold."""
    if not 0 < threshold < 1:
        raise ValueError(f"threshold must be in (0, 1), got {threshold}")
    known_ids = {p.id for p in corpus.papers}
    for doc in texts:
        if doc.paper_id not in known_ids:
            raise ValueError(f"document for unknown paper id {doc.paper_id}")

    titles = [(p.id, p.title) for p in corpus.papers]
    best_edges: dict[tuple[int, int], tuple[float, str]] = {}
    for doc in sorted(texts, key=lambda d: d.paper_id):
        section = locate_references(doc.body)
        for reference in split_references(section.text):
            candidates = []
            for paper_id, title in titles:
                if paper_id == doc.paper_id:
                    continue
                # capped search: exact for scores within the threshold,
                # which is all that edge selection needs
                score, window = match_window(reference, title, cap=threshold)
                candidates.append((score, paper_id, window))
            if not candidates:
                continue
            score, paper_id, window = min(candidates, key=lambda c: (c[0], c[1]))
            if score <= threshold:
                key = (doc.paper_id, paper_id)
                if key not in best_edges or score < best_edges[key][0]:
                    best_edges[key] = (score, window)

    edges = tuple(
        CitationEdge(source=src, target=dst, score=score, matched_span=window)
        for (src, dst), (score, window) in sorted(best_edges.items())
    )
    return CitationGraph(
        threshold=threshold,
        nodes=tuple(p.id for p in corpus.papers),
        edges=edges,
    )


def graph_to_dict(graph: CitationGraph) -> dict:
    return {
        "threshold": graph.threshold,
        "nodes": list(graph.nodes),
        "edges": [
            {
                "from": e.source,
                "to": e.target,
                "score": round(e.score, 6),
                "matched_span": e.matched_span,
            }
            for e in graph.edges
        ],
    }


def graph_from_dict(data: dict) -> CitationGraph:
    return CitationGraph(
        threshold=data["threshold"],
        nodes=tuple(data["nodes"]),
        edges=tuple(
            CitationEdge(
                source=e["from"],
                target=e["to"],
                score=e["score"],
                matched_span=e.get("matched_span", ""),
            )
            for e in data["edges"]
        ),
    )


def graph_to_json(graph: CitationGraph) -> str:
    return json.dumps(graph_to_dict(graph), indent=2, sort_keys=True)


def graph_to_dot(graph: CitationGraph) -> str:
    lines = ["digraph citations {"]
    for node in graph.nodes:
        lines.append(f'  p{node} [label="{node}"];')
    for edge in graph.edges:
        lines.append(f'  p{edge.source} -> p{edge.target} [label="{edge.score:.3f}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
