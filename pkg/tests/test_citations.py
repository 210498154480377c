import random

import pytest

import fixtures
from oracles import reference_levenshtein, reference_window_score
from surveyscope.citations import (
    DocumentText,
    build_graph,
    graph_from_dict,
    graph_to_dict,
    graph_to_dot,
    levenshtein,
    locate_references,
    match_score,
    match_window,
    normalize,
    split_references,
)


def test_locate_heading_cut():
    section = locate_references("intro text\nREFERENCES\n[1] entry one")
    assert section.text == "[1] entry one"
    assert section.heading_found


def test_locate_last_heading_wins():
    body = "we discuss references in passing\nReferences\nearly\nREFERENCES\nlate"
    section = locate_references(body)
    assert section.text == "late"


def test_locate_mid_sentence_mention_is_not_a_heading():
    body = "many references exist.\nno heading here"
    section = locate_references(body)
    assert not section.heading_found
    assert section.text == body


def test_locate_alternate_headings():
    assert locate_references("x\nBibliography\ny").heading_found
    assert locate_references("x\nLiterature Cited\ny").heading_found
    assert locate_references("x\nReferences:\ny").heading_found


def test_split_bracket_markers():
    text = "[1] First reference entry text. [2] Second reference entry text. [3] Third reference entry text."
    parts = split_references(text)
    assert len(parts) == 3
    assert parts[0].startswith("[1]")


def test_split_requires_three_ascending_markers():
    # [2] before [1]: falls back to blank-line mode
    text = "[2] Out of order entry text here.\n\n[1] Another entry follows afterwards."
    parts = split_references(text)
    assert len(parts) == 2


def test_split_numbered_lines():
    lines = "\n".join(
        f"{i}. Reference number {i} with plenty of text to keep." for i in range(1, 11)
    )
    assert len(split_references(lines)) == 10


def test_split_hanging_indent_blank_lines():
    entries = [
        f"Author {i}. A title that is long enough to keep. Venue {i}." for i in range(10)
    ]
    assert len(split_references("\n\n".join(entries))) == 10


def test_split_drops_short_fragments():
    assert split_references("tiny\n\nthis fragment is long enough to keep around") == [
        "this fragment is long enough to keep around"
    ]


def test_split_empty_section():
    assert split_references("") == []


def test_normalize():
    assert normalize("Hello,  World!") == "hello world"
    assert normalize("A-B c's") == "a b c s"


def test_levenshtein_matches_reference_oracle():
    rng = random.Random(3)
    alphabet = "abcde "
    for _ in range(100):
        a = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        b = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        assert levenshtein(a, b) == reference_levenshtein(a, b)


def test_exact_containment_scores_zero():
    assert match_score("J. Doe. Latency compensation in mixed reality. 2019.",
                       "Latency Compensation in Mixed Reality") == 0.0


def test_single_substitution_fraction():
    score = match_score("say hallo world now", "hello")
    assert score == pytest.approx(0.2)
    assert score <= 0.25
    assert score > 0.15


def test_disjoint_equal_length_scores_one():
    assert match_score("aaaa", "bbbb") == 1.0


def test_reference_shorter_than_title():
    assert match_score("abc", "abcdef") == pytest.approx(3 / 6)


def test_match_score_agrees_with_window_oracle():
    rng = random.Random(11)
    words = ["alpha", "beta", "gamma", "delta", "epsilon", "zeta", "qq", "zz"]
    for _ in range(60):
        reference = " ".join(rng.choice(words) for _ in range(rng.randint(1, 10)))
        title = " ".join(rng.choice(words) for _ in range(rng.randint(1, 4)))
        got = match_score(reference, title)
        want = reference_window_score(normalize(reference), normalize(title))
        assert got == pytest.approx(want), (reference, title)


@pytest.fixture(scope="module")
def citation_data():
    return fixtures.citation_fixture()


def test_two_paper_exact_edge_at_every_threshold(citation_data):
    corpus, texts, _ = citation_data
    docs = [DocumentText(0, texts[0])]
    for threshold in (0.05, 0.15, 0.25, 0.35, 0.8):
        graph = build_graph(corpus, docs, threshold)
        assert (0, 10) in {(e.source, e.target) for e in graph.edges}
        edge = next(e for e in graph.edges if e.target == 10)
        assert edge.score == 0.0


def test_no_self_edges_and_threshold_bounds(citation_data):
    corpus, texts, _ = citation_data
    self_citing = [DocumentText(0, f"REFERENCES\n\nX. {corpus.papers[0].title}. 2020.")]
    graph = build_graph(corpus, self_citing, 0.35)
    assert all(e.source != e.target for e in graph.edges)
    with pytest.raises(ValueError):
        build_graph(corpus, self_citing, 0.0)
    with pytest.raises(ValueError):
        build_graph(corpus, self_citing, 1.0)


def test_unknown_document_id_rejected(citation_data):
    corpus, _, _ = citation_data
    with pytest.raises(ValueError, match="unknown paper id"):
        build_graph(corpus, [DocumentText(999, "x")], 0.25)


def test_graph_deterministic_under_document_order(citation_data):
    corpus, texts, _ = citation_data
    docs = [DocumentText(i, b) for i, b in texts.items()]
    forward = build_graph(corpus, docs, 0.25)
    backward = build_graph(corpus, list(reversed(docs)), 0.25)
    assert forward == backward


def test_threshold_monotonicity_on_fixture(citation_data):
    corpus, texts, _ = citation_data
    docs = [DocumentText(i, b) for i, b in texts.items()]
    previous: set = set()
    for threshold in (0.05, 0.15, 0.25, 0.35, 0.5):
        edges = {(e.source, e.target) for e in build_graph(corpus, docs, threshold).edges}
        assert previous <= edges
        previous = edges


def test_matched_span_rescores_to_recorded_score(citation_data):
    corpus, texts, _ = citation_data
    docs = [DocumentText(i, b) for i, b in texts.items()]
    graph = build_graph(corpus, docs, 0.35)
    titles = {p.id: p.title for p in corpus.papers}
    assert graph.edges
    for edge in graph.edges:
        title_norm = normalize(titles[edge.target])
        rescored = levenshtein(edge.matched_span, title_norm) / len(title_norm)
        assert rescored == pytest.approx(edge.score)


def test_tie_breaks_to_lowest_paper_id(citation_data):
    corpus, _, _ = citation_data
    # duplicate title: both papers score 0; lowest id wins
    papers = list(corpus.papers)
    from surveyscope.ingest.corpus import Paper

    papers[3] = Paper(id=3, title=papers[2].title, year=2001)
    from dataclasses import replace

    twinned = replace(corpus, papers=tuple(papers))
    doc = DocumentText(7, f"REFERENCES\n\nX. Y. {papers[2].title}. Somewhere, 2001.")
    graph = build_graph(twinned, [doc], 0.25)
    assert {(e.source, e.target) for e in graph.edges} == {(7, 2)}


def test_graph_json_round_trip(citation_data):
    corpus, texts, _ = citation_data
    docs = [DocumentText(i, b) for i, b in texts.items()]
    graph = build_graph(corpus, docs, 0.25)
    assert graph_from_dict(graph_to_dict(graph)) == graph


def test_graph_dot_output(citation_data):
    corpus, texts, _ = citation_data
    graph = build_graph(corpus, [DocumentText(0, texts[0])], 0.25)
    dot = graph_to_dot(graph)
    assert dot.startswith("digraph")
    assert "p0 -> p10" in dot
