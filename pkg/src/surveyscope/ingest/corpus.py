"""Loading the survey corpus: papers, taxonomies, and the membership matrix."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .config import SurveyConfig
from .taxonomy import TaxonomyNode, build_taxonomy, taxonomy_from_dict, taxonomy_to_dict


class CorpusError(ValueError):
    """Raised when the sheet cannot be loaded against the configuration."""


@dataclass(frozen=True)
class Paper:
    id: int  # spreadsheet row index, stable across reloads
    title: str
    authors: str = ""
    venue: str = ""
    year: int | None = None
    abstract: str | None = None


@dataclass(frozen=True)
class Taxonomy:
    name: str
    default: bool
    root: TaxonomyNode


@dataclass
class SurveyCorpus:
    title_text: str
    papers: tuple[Paper, ...]
    taxonomies: tuple[Taxonomy, ...]
    # membership[i][j]: paper i carries leaf class j of the default taxonomy,
    # leaves ordered by column (== pre-order).
    membership: tuple[tuple[bool, ...], ...]
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    @property
    def default_taxonomy(self) -> Taxonomy:
        for tax in self.taxonomies:
            if tax.default:
                return tax
        raise CorpusError("corpus has no default taxonomy")

    @property
    def leaves(self) -> list[TaxonomyNode]:
        return self.default_taxonomy.root.leaves()

    def paper_by_id(self, paper_id: int) -> Paper:
        for paper in self.papers:
            if paper.id == paper_id:
                return paper
        raise KeyError(paper_id)

    def profile_of(self, paper_index: int) -> tuple[bool, ...]:
        return self.membership[paper_index]


def read_sheet(path_or_text, *, is_text: bool = False) -> list[list[str]]:
    """Read an RFC 4180 CSV export into a grid of cells."""
    if is_text:
        handle = io.StringIO(path_or_text)
        return list(csv.reader(handle))
    with open(path_or_text, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def _cell(sheet: list[list[str]], row: int, col: int | None) -> str:
    if col is None:
        return ""
    if 0 <= row < len(sheet) and 0 <= col < len(sheet[row]):
        return sheet[row][col]
    return ""


def _parse_year(raw: str) -> int | None:
    raw = raw.strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        value = float(raw)
    except ValueError:
        return None
    return int(value) if value.is_integer() else None


def load_corpus(config: SurveyConfig, sheet: list[list[str]]) -> SurveyCorpus:
    """Build a SurveyCorpus from a parsed config and a CSV cell grid.

    Rows with an empty title are rejected with a diagnostic naming the row;
    the rest of the load proceeds.
    """
    taxonomies = []
    for tax_range in config.taxonomies:
        root = build_taxonomy(
            sheet,
            rows=(tax_range.header_rows.start, tax_range.header_rows.stop),
            cols=(tax_range.columns.start, tax_range.columns.stop),
        )
        taxonomies.append(Taxonomy(name=tax_range.name, default=tax_range.default, root=root))

    default_root = next(t.root for t in taxonomies if t.default)
    leaf_columns = [leaf.column_span[0] for leaf in default_root.leaves()]

    papers: list[Paper] = []
    membership: list[tuple[bool, ...]] = []
    diagnostics: list[str] = []
    for row in config.paper_rows.indices():
        title = _cell(sheet, row, config.key_map.title).strip()
        if not title:
            diagnostics.append(f"row {row}: empty title, row rejected")
            continue
        papers.append(
            Paper(
                id=row,
                title=title,
                authors=_cell(sheet, row, config.key_map.authors).strip(),
                venue=_cell(sheet, row, config.key_map.venue).strip(),
                year=_parse_year(_cell(sheet, row, config.key_map.year)),
                abstract=_cell(sheet, row, config.key_map.abstract).strip() or None,
            )
        )
        membership.append(tuple(bool(_cell(sheet, row, c).strip()) for c in leaf_columns))

    return SurveyCorpus(
        title_text=config.title_text,
        papers=tuple(papers),
        taxonomies=tuple(taxonomies),
        membership=tuple(membership),
        diagnostics=tuple(diagnostics),
    )


def corpus_to_dict(corpus: SurveyCorpus) -> dict:
    """Canonical JSON-ready form: membership as per-paper true-leaf index lists."""
    return {
        "title_text": corpus.title_text,
        "papers": [
            {
                "id": p.id,
                "title": p.title,
                "authors": p.authors,
                "venue": p.venue,
                "year": p.year,
                "abstract": p.abstract,
            }
            for p in corpus.papers
        ],
        "taxonomies": [
            {"name": t.name, "default": t.default, "root": taxonomy_to_dict(t.root)}
            for t in corpus.taxonomies
        ],
        "membership": [
            [j for j, marked in enumerate(row) if marked] for row in corpus.membership
        ],
    }


def corpus_from_dict(data: dict) -> SurveyCorpus:
    taxonomies = tuple(
        Taxonomy(name=t["name"], default=t["default"], root=taxonomy_from_dict(t["root"]))
        for t in data["taxonomies"]
    )
    papers = tuple(
        Paper(
            id=p["id"],
            title=p["title"],
            authors=p.get("authors") or "",
            venue=p.get("venue") or "",
            year=p.get("year"),
            abstract=p.get("abstract"),
        )
        for p in data["papers"]
    )
    n_leaves = len(next(t.root for t in taxonomies if t.default).leaves())
    membership = tuple(
        tuple(j in set(true_leaves) for j in range(n_leaves)) for true_leaves in data["membership"]
    )
    return SurveyCorpus(
        title_text=data.get("title_text", ""),
        papers=papers,
        taxonomies=taxonomies,
        membership=membership,
    )


def corpus_to_json(corpus: SurveyCorpus) -> str:
    return json.dumps(corpus_to_dict(corpus), indent=2, sort_keys=True)


def corpus_from_json(text: str) -> SurveyCorpus:
    return corpus_from_dict(json.loads(text))
