"""Aggregations behind the hierarchy, affinity, and insights views.

Everything here is a pure function of an immutable corpus: per-class paper
sets and year spans, filtered timelines, keyword search, and the 2D
projection of papers in tag space (top-2 principal directions by power
iteration, fit on known papers only so hypothetical profiles never shift
the map).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest.corpus import SurveyCorpus

POWER_TOLERANCE = 1e-9
POWER_MAX_ITERATIONS = 10_000


@dataclass(frozen=True)
class ClassStats:
    classpath: str
    label: str
    depth: int
    is_leaf: bool
    paper_count: int
    papers: tuple[int, ...]  # paper ids, ascending
    first_year: int | None
    last_year: int | None

    @property
    def is_gap(self) -> bool:
        return self.paper_count == 0


def class_stats(corpus: SurveyCorpus) -> dict[str, ClassStats]:
    """Stats per default-taxonomy node; an internal node's paper set is the
    union of its children's."""
    root = corpus.default_taxonomy.root
    leaves = root.leaves()
    papers_by_leaf: dict[int, set[int]] = {leaf.id: set() for leaf in leaves}
    for paper, row in zip(corpus.papers, corpus.membership):
        for leaf, marked in zip(leaves, row):
            if marked:
                papers_by_leaf[leaf.id].add(paper.id)

    years = {p.id: p.year for p in corpus.papers}
    stats: dict[str, ClassStats] = {}

    def collect(node) -> set[int]:
        if node.is_leaf:
            ids = papers_by_leaf.get(node.id, set())
        else:
            ids = set()
            for child in node.children:
                ids |= collect(child)
        if node.path:
            with_years = sorted(years[i] for i in ids if years[i] is not None)
            stats[node.classpath] = ClassStats(
                classpath=node.classpath,
                label=node.label,
                depth=len(node.path),
                is_leaf=node.is_leaf,
                paper_count=len(ids),
                papers=tuple(sorted(ids)),
                first_year=with_years[0] if with_years else None,
                last_year=with_years[-1] if with_years else None,
            )
        return ids

    collect(root)
    return stats


def _paper_tags(corpus: SurveyCorpus, paper_index: int) -> set[str]:
    """Classpaths the paper carries, leaves and their ancestors."""
    tags: set[str] = set()
    for leaf, marked in zip(corpus.leaves, corpus.membership[paper_index]):
        if marked:
            for depth in range(1, len(leaf.path) + 1):
                tags.add(" > ".join(leaf.path[:depth]))
    return tags


def search(corpus: SurveyCorpus, terms: list[str], mode: str = "all") -> list[int]:
    """Paper ids whose metadata contains the terms (case-insensitive
    substrings), ordered by year descending then title."""
    if not terms:
        raise ValueError("search needs at least one term")
    if mode not in ("all", "any"):
        raise ValueError(f"mode must be 'all' or 'any', got {mode!r}")
    needles = [t.lower() for t in terms]
    combine = all if mode == "all" else any
    hits = []
    for paper in corpus.papers:
        haystack = " ".join(
            filter(None, [paper.title, paper.authors, paper.venue, paper.abstract or ""])
        ).lower()
        if combine(needle in haystack for needle in needles):
            hits.append(paper)
    hits.sort(key=lambda p: (-(p.year) if p.year is not None else float("inf"), p.title, p.id))
    return [p.id for p in hits]


def filter_papers(
    corpus: SurveyCorpus,
    terms: list[str] | None = None,
    mode: str = "all",
    year_min: int | None = None,
    year_max: int | None = None,
    tags: list[str] | None = None,
) -> list[int]:
    """Intersection of keyword, year-range, and tag filters; papers without
    a year fail any active year filter. Result ordered like search()."""
    if year_min is not None and year_max is not None and year_min > year_max:
        raise ValueError(f"year_min {year_min} > year_max {year_max}")
    selected = set(search(corpus, terms, mode)) if terms else {p.id for p in corpus.papers}
    kept = []
    for i, paper in enumerate(corpus.papers):
        if paper.id not in selected:
            continue
        if year_min is not None or year_max is not None:
            if paper.year is None:
                continue
            if year_min is not None and paper.year < year_min:
                continue
            if year_max is not None and paper.year > year_max:
                continue
        if tags:
            carried = _paper_tags(corpus, i)
            if not all(tag in carried for tag in tags):
                continue
        kept.append(paper)
    kept.sort(key=lambda p: (-(p.year) if p.year is not None else float("inf"), p.title, p.id))
    return [p.id for p in kept]


@dataclass(frozen=True)
class TimelineSeries:
    start: int | None
    stop: int | None
    counts: tuple[int, ...]  # one entry per year from start to stop
    no_year: int  # filtered papers excluded for lacking a year

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "stop": self.stop,
            "counts": list(self.counts),
            "no_year": self.no_year,
        }


def timeline_series(
    corpus: SurveyCorpus,
    terms: list[str] | None = None,
    mode: str = "all",
    year_min: int | None = None,
    year_max: int | None = None,
    tags: list[str] | None = None,
) -> TimelineSeries:
    """Per-year counts of the filtered papers, gaps filled with 0."""
    ids = set(filter_papers(corpus, terms, mode, None, None, tags))
    years = []
    no_year = 0
    for paper in corpus.papers:
        if paper.id not in ids:
            continue
        if paper.year is None:
            no_year += 1
        elif (year_min is None or paper.year >= year_min) and (
            year_max is None or paper.year <= year_max
        ):
            years.append(paper.year)
    if year_min is not None and year_max is not None:
        start, stop = year_min, year_max
        if start > stop:
            raise ValueError(f"year_min {year_min} > year_max {year_max}")
    elif years:
        start = year_min if year_min is not None else min(years)
        stop = year_max if year_max is not None else max(years)
    else:
        return TimelineSeries(start=None, stop=None, counts=(), no_year=no_year)
    counts = [0] * (stop - start + 1)
    for year in years:
        counts[year - start] += 1
    return TimelineSeries(start=start, stop=stop, counts=tuple(counts), no_year=no_year)


@dataclass(frozen=True)
class ProjectedPoint:
    paper_id: int | None  # None marks a hypothetical profile
    x: float
    y: float

    def to_dict(self) -> dict:
        return {"paper_id": self.paper_id, "x": self.x, "y": self.y}


@dataclass(frozen=True)
class Projection:
    points: tuple[ProjectedPoint, ...]
    degenerate: bool  # all input rows identical; every point at the origin

    def to_dict(self) -> dict:
        return {"points": [p.to_dict() for p in self.points], "degenerate": self.degenerate}


def _power_iteration(matrix: np.ndarray, start: np.ndarray) -> tuple[np.ndarray, float]:
    """Dominant eigenpair of a PSD matrix; zero vector when the matrix is
    (numerically) null."""
    v = start / np.linalg.norm(start)
    for _ in range(POWER_MAX_ITERATIONS):
        w = matrix @ v
        norm = np.linalg.norm(w)
        if norm < 1e-15:
            return np.zeros_like(v), 0.0
        w = w / norm
        if np.linalg.norm(w - v) < POWER_TOLERANCE:
            v = w
            break
        v = w
    eigenvalue = float(v @ (matrix @ v))
    return v, eigenvalue


def _fix_sign(v: np.ndarray) -> np.ndarray:
    for x in v:
        if abs(x) > 1e-12:
            return v if x > 0 else -v
    return v


def _top2_directions(rows: np.ndarray, seed: int) -> tuple[np.ndarray, np.ndarray, float, float]:
    d = rows.shape[1]
    cov = rows.T @ rows
    start = np.random.default_rng(seed).standard_normal(d)
    v1, lam1 = _power_iteration(cov, start)
    deflated = cov - lam1 * np.outer(v1, v1)
    v2, lam2 = _power_iteration(deflated, start)
    return _fix_sign(v1), _fix_sign(v2), lam1, lam2


def project_rows(
    matrix: np.ndarray, extra_rows: np.ndarray | None = None, seed: int = 0
) -> tuple[np.ndarray, np.ndarray | None, bool]:
    """Center, fit top-2 principal directions on `matrix` alone, and project
    both it and `extra_rows`."""
    mu = matrix.mean(axis=0)
    centered = matrix - mu
    v1, v2, lam1, _ = _top2_directions(centered, seed)
    degenerate = lam1 < 1e-12
    basis = np.stack([v1, v2], axis=1)
    coords = centered @ basis
    extra_coords = (extra_rows - mu) @ basis if extra_rows is not None else None
    return coords, extra_coords, degenerate


def project_tags(
    corpus: SurveyCorpus,
    extra_profiles: list[tuple[bool, ...]] | None = None,
    seed: int = 0,
) -> Projection:
    """Project leaf-profile vectors to 2D; hypothetical profiles are passive
    rows that do not influence the fitted directions."""
    if len(corpus.papers) < 2:
        raise ValueError("projection needs at least 2 papers")
    if len(corpus.leaves) < 2:
        raise ValueError("projection needs at least 2 leaf classes")
    matrix = np.array(corpus.membership, dtype=float)
    extras = (
        np.array([[float(b) for b in prof] for prof in extra_profiles], dtype=float)
        if extra_profiles
        else None
    )
    coords, extra_coords, degenerate = project_rows(matrix, extras, seed)
    points = [
        ProjectedPoint(paper_id=p.id, x=float(x), y=float(y))
        for p, (x, y) in zip(corpus.papers, coords)
    ]
    if extra_coords is not None:
        points.extend(
            ProjectedPoint(paper_id=None, x=float(x), y=float(y)) for x, y in extra_coords
        )
    return Projection(points=tuple(points), degenerate=degenerate)


def parse_embeddings(text: str) -> dict[int, list[float]]:
    """One line per paper: `<paper_id> v1 v2 ... vd`, d fixed."""
    vectors: dict[int, list[float]] = {}
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            paper_id = int(fields[0])
            vector = [float(x) for x in fields[1:]]
        except ValueError:
            raise ValueError(f"embeddings line {lineno}: malformed entry") from None
        if not vector:
            raise ValueError(f"embeddings line {lineno}: no vector components")
        if width is None:
            width = len(vector)
        elif len(vector) != width:
            raise ValueError(
                f"embeddings line {lineno}: expected {width} components, got {len(vector)}"
            )
        vectors[paper_id] = vector
    return vectors


def affinity_coordinates(
    corpus: SurveyCorpus,
    embeddings: dict[int, list[float]] | None = None,
    seed: int = 0,
) -> Projection:
    """Project precomputed per-paper embedding vectors when given, else fall
    back to the tag-space projection."""
    if embeddings is None:
        return project_tags(corpus, seed=seed)
    known = [p.id for p in corpus.papers]
    missing = [i for i in known if i not in embeddings]
    if missing:
        raise ValueError(f"embeddings missing paper ids {missing}")
    extra = sorted(set(embeddings) - set(known))
    if extra:
        raise ValueError(f"embeddings contain unknown paper ids {extra}")
    matrix = np.array([embeddings[i] for i in known], dtype=float)
    coords, _, degenerate = project_rows(matrix, None, seed)
    points = tuple(
        ProjectedPoint(paper_id=p.id, x=float(x), y=float(y))
        for p, (x, y) in zip(corpus.papers, coords)
    )
    return Projection(points=points, degenerate=degenerate)
