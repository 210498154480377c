from .config import ConfigError, KeyMap, RowRange, SurveyConfig, TaxonomyRange, parse_config
from .corpus import (
    CorpusError,
    Paper,
    SurveyCorpus,
    Taxonomy,
    corpus_from_dict,
    corpus_from_json,
    corpus_to_dict,
    corpus_to_json,
    load_corpus,
    read_sheet,
)
from .taxonomy import TaxonomyError, TaxonomyNode, build_taxonomy

__all__ = [
    "ConfigError",
    "CorpusError",
    "KeyMap",
    "Paper",
    "RowRange",
    "SurveyConfig",
    "SurveyCorpus",
    "Taxonomy",
    "TaxonomyError",
    "TaxonomyNode",
    "TaxonomyRange",
    "build_taxonomy",
    "corpus_from_dict",
    "corpus_from_json",
    "corpus_to_dict",
    "corpus_to_json",
    "load_corpus",
    "parse_config",
    "read_sheet",
]
