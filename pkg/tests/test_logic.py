import itertools

import pytest

import fixtures
from oracles import brute_force_count
from surveyscope.constraints import parse_constraints
from surveyscope.ingest.corpus import Paper, SurveyCorpus, Taxonomy
from surveyscope.ingest.taxonomy import build_taxonomy
from surveyscope.logic import (
    DSL,
    PAPERS,
    TheoryError,
    build_theory,
    evaluate_clause,
    export_dimacs,
    paper_assignment,
    theory_from_dict,
    theory_to_dict,
    validate_papers,
)


def tiny_corpus(profiles):
    """One class A with leaves a1, a2; membership rows from profiles."""
    root = build_taxonomy([["A", ""], ["a1", "a2"]], rows=(0, 1), cols=(0, 1))
    papers = tuple(
        Paper(id=i, title=f"Paper {i}", year=2020 + i) for i in range(len(profiles))
    )
    return SurveyCorpus(
        title_text="tiny",
        papers=papers,
        taxonomies=(Taxonomy(name="t", default=True, root=root),),
        membership=tuple(tuple(p) for p in profiles),
    )


def test_variable_bijection_preorder(modelacq_theory):
    variables = modelacq_theory.variables
    assert [v.index for v in variables] == list(range(1, 19))  # 6 internal + 12 leaves
    assert variables[0].classpath == "Setting"
    assert not variables[0].is_leaf
    assert variables[1].classpath == "Setting > Observability"
    assert variables[2].classpath == "Setting > Observability > Unobservable"
    assert variables[2].is_leaf
    assert sum(v.is_leaf for v in variables) == 12


def test_structural_clauses_for_single_parent():
    theory = build_theory(tiny_corpus([]), [])
    # A=1, a1=2, a2=3 in pre-order
    assert set(theory.structural) == {
        frozenset({-2, 1}),
        frozenset({-3, 1}),
        frozenset({-1, 2, 3}),
    }
    assert theory.blocking == ()


def test_atleastone_maps_to_single_positive_clause():
    directives = parse_constraints("atleastone:A > a1,A > a2")
    theory = build_theory(tiny_corpus([]), directives)
    assert set(theory.semantic) == {frozenset({2, 3})}


def test_implies_chain_clauses():
    directives = parse_constraints("implies:A > a1,A > a2")
    theory = build_theory(tiny_corpus([]), directives)
    assert set(theory.semantic) == {frozenset({-2, 3})}


def test_negated_implies_literal():
    directives = parse_constraints("implies:A > a1,~A > a2")
    theory = build_theory(tiny_corpus([]), directives)
    assert set(theory.semantic) == {frozenset({-2, -3})}


def test_atmostone_internal_node_expands_to_children(modelacq_theory):
    signal = [v.index for v in modelacq_theory.variables if "Signal > " in v.classpath]
    expected = {
        frozenset({-a, -b}) for a, b in itertools.combinations(signal, 2)
    }
    assert expected <= set(modelacq_theory.semantic)


def test_blocking_clause_flips_profile_literals():
    theory = build_theory(tiny_corpus([(True, False)]), [])
    assert set(theory.blocking) == {frozenset({-2, 3})}
    # brute force: exactly profile (1, 0) is excluded over the leaf space
    clauses = theory.all_clauses()
    count = brute_force_count(clauses, 3)
    # valid assignments: a1a2 in {00, 01, 11} with A = a1 | a2
    assert count == 3


def test_duplicate_profiles_collapse_with_merged_provenance():
    theory = build_theory(tiny_corpus([(True, False), (True, False)]), [])
    assert len(theory.blocking) == 1
    (clause,) = theory.blocking
    sources = theory.provenance[clause]
    assert (PAPERS, (0, 1)) in sources


def test_all_false_profile_blocks_all_positive():
    theory = build_theory(tiny_corpus([(False, False)]), [])
    assert set(theory.blocking) == {frozenset({2, 3})}


def test_tautological_directive_clause_dropped():
    directives = parse_constraints("implies:A > a1,A > a1")
    theory = build_theory(tiny_corpus([]), directives)
    assert theory.semantic == ()


def test_unresolvable_classpath_reports_line():
    directives = parse_constraints("implies:A > a1,A > nope")
    with pytest.raises(TheoryError, match="line 1"):
        build_theory(tiny_corpus([]), directives)


def test_modelacq_counts_over_all_vars_equal_leaf_space(modelacq_corpus, modelacq_theory):
    clauses = modelacq_theory.all_clauses()
    full = brute_force_count(clauses, modelacq_theory.var_count)
    # leaf-space oracle: enumerate leaf profiles, derive internals
    no_blocking = brute_force_count(
        modelacq_theory.all_clauses(include_blocking=False), modelacq_theory.var_count
    )
    assert no_blocking == fixtures.MODELACQ_VALID_PROFILES
    assert full == fixtures.MODELACQ_UNWRITTEN


def test_known_papers_satisfy_theory_and_fail_own_blocking(modelacq_corpus, modelacq_theory):
    leaf_vars = [v.index for v in modelacq_theory.leaf_variables]
    for i, profile in enumerate(modelacq_corpus.membership):
        assignment = paper_assignment(modelacq_corpus, i)
        for clause in modelacq_theory.all_clauses(include_blocking=False):
            assert evaluate_clause(clause, assignment)
        own = frozenset(-v if m else v for v, m in zip(leaf_vars, profile))
        for clause in modelacq_theory.blocking:
            if clause == own:
                assert not evaluate_clause(clause, assignment)
            else:
                assert evaluate_clause(clause, assignment)


def test_validate_papers_clean_fixture_is_empty(modelacq_corpus, modelacq_directives):
    assert validate_papers(modelacq_corpus, modelacq_directives) == []


def test_validate_papers_flags_trace_violation(modelacq_directives):
    corpus = fixtures.modelacq_corpus(violation=True)
    violations = validate_papers(corpus, modelacq_directives)
    assert len(violations) == 1
    violation = violations[0]
    assert violation.paper_id == 5
    assert violation.provenance[0] == DSL
    assert violation.provenance[1] == fixtures.TRACE_IMPLIES_LINE
    assert str(fixtures.TRACE_IMPLIES_LINE) in violation.describe()


def test_validate_papers_flags_empty_profile_against_atleastone():
    directives = parse_constraints("atleastone:A > a1,A > a2")
    violations = validate_papers(tiny_corpus([(False, False)]), directives)
    assert len(violations) == 1
    assert violations[0].provenance[0] == DSL


def test_export_dimacs_empty_theory():
    theory = build_theory(tiny_corpus([]), [])
    # strip it down to just variables for the 2-var empty case
    from surveyscope.logic import CnfTheory

    empty = CnfTheory(
        variables=theory.variables[:2],
        structural=(),
        semantic=(),
        blocking=(),
        provenance={},
    )
    text = export_dimacs(empty)
    assert "p cnf 2 0" in text
    assert "c var 1 = 'A' (internal)" in text


def test_export_dimacs_clause_lines():
    theory = build_theory(tiny_corpus([]), [])
    text = export_dimacs(theory)
    lines = [l for l in text.splitlines() if not l.startswith(("c", "p"))]
    # literals ordered by variable index, like the (-1 v 2) -> "-1 2 0" rule
    assert "1 -2 0" in lines
    assert "1 -3 0" in lines
    assert "-1 2 3 0" in lines
    assert len(lines) == 3


def test_theory_dict_round_trip(modelacq_theory):
    rebuilt = theory_from_dict(theory_to_dict(modelacq_theory))
    assert rebuilt.variables == modelacq_theory.variables
    assert set(rebuilt.structural) == set(modelacq_theory.structural)
    assert set(rebuilt.semantic) == set(modelacq_theory.semantic)
    assert set(rebuilt.blocking) == set(modelacq_theory.blocking)
    assert rebuilt.provenance == modelacq_theory.provenance
