"""Survey configuration parsing.

The config file is YAML with a fixed schema: survey metadata, the
spreadsheet location, where the paper rows live, and one or more taxonomy
blocks giving the header rows/columns of each classification hierarchy.
All row/column indices are 0-based and ranges are inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml


class ConfigError(ValueError):
    """Raised when the survey configuration is missing or malformed."""


@dataclass(frozen=True)
class RowRange:
    start: int
    stop: int
    exclude: frozenset[int] = frozenset()

    def indices(self) -> list[int]:
        return [r for r in range(self.start, self.stop + 1) if r not in self.exclude]


@dataclass(frozen=True)
class KeyMap:
    """Column indices of paper metadata. Only the title is mandatory."""

    title: int
    abstract: int | None = None
    authors: int | None = None
    venue: int | None = None
    year: int | None = None


@dataclass(frozen=True)
class TaxonomyRange:
    name: str
    default: bool
    header_rows: RowRange
    columns: RowRange


@dataclass(frozen=True)
class SurveyConfig:
    tab_name: str
    title_text: str
    input_file: dict = field(default_factory=dict)
    key_map: KeyMap = None  # type: ignore[assignment]
    paper_rows: RowRange = None  # type: ignore[assignment]
    taxonomies: tuple[TaxonomyRange, ...] = ()

    @property
    def default_taxonomy(self) -> TaxonomyRange:
        for tax in self.taxonomies:
            if tax.default:
                return tax
        raise ConfigError("no default taxonomy")


def _require(mapping: dict, key: str, where: str):
    if not isinstance(mapping, dict) or key not in mapping or mapping[key] is None:
        raise ConfigError(f"missing required key '{key}' in {where}")
    return mapping[key]


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected integer for {where}, got {value!r}")
    return value


def _opt_int(mapping: dict, key: str, where: str) -> int | None:
    value = mapping.get(key)
    if value is None:
        return None
    return _as_int(value, f"{where}.{key}")


def _parse_range(mapping, where: str, with_exclude: bool = False) -> RowRange:
    start = _as_int(_require(mapping, "start", where), f"{where}.start")
    stop = _as_int(_require(mapping, "stop", where), f"{where}.stop")
    if start > stop:
        raise ConfigError(f"{where}: start {start} > stop {stop}")
    exclude: frozenset[int] = frozenset()
    if with_exclude and mapping.get("exclude") is not None:
        raw = mapping["exclude"]
        if not isinstance(raw, list):
            raise ConfigError(f"{where}.exclude must be a list")
        rows = [_as_int(r, f"{where}.exclude") for r in raw]
        bad = [r for r in rows if not start <= r <= stop]
        if bad:
            raise ConfigError(f"{where}.exclude rows {bad} outside [{start}, {stop}]")
        exclude = frozenset(rows)
    return RowRange(start, stop, exclude)


def _parse_taxonomy_block(block, index: int) -> TaxonomyRange:
    where = f"taxonomy[{index}]"
    if not isinstance(block, dict):
        raise ConfigError(f"{where} must be a mapping")
    rows = _parse_range(_require(block, "rows", where), f"{where}.rows")
    columns = _parse_range(_require(block, "columns", where), f"{where}.columns")
    name = block.get("name") or f"taxonomy-{index}"
    default = bool(block.get("default", False))
    return TaxonomyRange(name=str(name), default=default, header_rows=rows, columns=columns)


def parse_config(text: str) -> SurveyConfig:
    """Parse a survey config document into a validated SurveyConfig."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a mapping")

    tab_name = str(_require(doc, "tab_name", "config"))
    title_text = str(doc.get("title_text") or "")
    input_file = _require(doc, "input_file", "config")
    if not isinstance(input_file, dict) or "filename" not in input_file:
        raise ConfigError("input_file must be a mapping with a 'filename' key")

    papers_list = _require(doc, "papers_list", "config")
    key_map_raw = _require(papers_list, "key_map", "papers_list")
    title_col = _as_int(_require(key_map_raw, "title", "papers_list.key_map"), "key_map.title")
    key_map = KeyMap(
        title=title_col,
        abstract=_opt_int(key_map_raw, "abstract", "key_map"),
        authors=_opt_int(key_map_raw, "authors", "key_map"),
        venue=_opt_int(key_map_raw, "venue", "key_map"),
        year=_opt_int(key_map_raw, "year", "key_map"),
    )
    paper_rows = _parse_range(
        _require(papers_list, "rows", "papers_list"), "papers_list.rows", with_exclude=True
    )

    raw_tax = _require(doc, "taxonomy", "config")
    blocks = raw_tax if isinstance(raw_tax, list) else [raw_tax]
    if not blocks:
        raise ConfigError("at least one taxonomy block is required")
    taxonomies = [_parse_taxonomy_block(b, i) for i, b in enumerate(blocks)]

    n_default = sum(1 for t in taxonomies if t.default)
    if n_default > 1:
        raise ConfigError("more than one taxonomy marked default")
    if n_default == 0:
        taxonomies[0] = TaxonomyRange(
            name=taxonomies[0].name,
            default=True,
            header_rows=taxonomies[0].header_rows,
            columns=taxonomies[0].columns,
        )

    return SurveyConfig(
        tab_name=tab_name,
        title_text=title_text,
        input_file=dict(input_file),
        key_map=key_map,
        paper_rows=paper_rows,
        taxonomies=tuple(taxonomies),
    )
