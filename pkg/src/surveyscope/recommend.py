"""Generation of unwritten-paper profiles and their nearest known neighbors.

Each generated paper starts from a fresh compilation of the theory plus the
blocking clauses of papers generated so far, walks the soft preference list
in order (keeping each preference that stays consistent), and extracts one
model. Neighbors are the closest known papers by Hamming distance over
leaf profiles, each annotated with the features it would have to add
(extend) or drop (relax) to become the generated paper.
"""

from __future__ import annotations

from dataclasses import dataclass

from .compiler import compile_theory, condition, count_models, extract_model
from .constraints import ClassTerm, parse_term
from .ingest.corpus import SurveyCorpus
from .logic import CnfTheory


@dataclass(frozen=True)
class Neighbor:
    paper_id: int
    distance: int
    extend: tuple[str, ...]  # classpaths the neighbor must add
    relax: tuple[str, ...]  # classpaths the neighbor must drop

    def to_dict(self) -> dict:
        return {
            "paper_id": self.paper_id,
            "distance": self.distance,
            "extend": list(self.extend),
            "relax": list(self.relax),
        }


@dataclass(frozen=True)
class Recommendation:
    profile: tuple[bool, ...]  # leaf assignment, leaves in column order
    features: tuple[str, ...]  # classpaths of the true leaves
    satisfied_preferences: tuple[str, ...]
    rejected_preferences: tuple[str, ...]
    neighbors: tuple[Neighbor, ...]

    def to_dict(self) -> dict:
        return {
            "profile": [int(b) for b in self.profile],
            "features": list(self.features),
            "satisfied_preferences": list(self.satisfied_preferences),
            "rejected_preferences": list(self.rejected_preferences),
            "neighbors": [n.to_dict() for n in self.neighbors],
        }


@dataclass(frozen=True)
class RecommendResult:
    recommendations: tuple[Recommendation, ...]
    exhausted: bool  # fewer profiles remained than requested

    @property
    def none_remain(self) -> bool:
        return self.exhausted and not self.recommendations

    def to_dict(self) -> dict:
        return {
            "recommendations": [r.to_dict() for r in self.recommendations],
            "exhausted": self.exhausted,
        }


def parse_preferences(text: str) -> list[ClassTerm]:
    """One signed classpath per line, order significant; '#' comments and
    blank lines ignored."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            terms.append(parse_term(line))
        except ValueError:
            raise ValueError(f"preferences line {lineno}: empty term") from None
    return terms


def default_preferences(theory: CnfTheory) -> list[ClassTerm]:
    """Absent an explicit list, every class defaults to its nominal
    (negative) setting, in variable order."""
    return [ClassTerm(negated=True, path=v.classpath) for v in theory.variables]


def _resolve_terms(
    theory: CnfTheory, terms, unique: bool = True
) -> list[tuple[ClassTerm, int]]:
    resolved = []
    seen_vars: set[int] = set()
    for term in terms:
        var = theory.variable_by_classpath(term.path).index
        if unique and var in seen_vars:
            raise ValueError(f"classpath {term.path!r} appears twice in preference list")
        seen_vars.add(var)
        resolved.append((term, -var if term.negated else var))
    return resolved


def recommend(
    theory: CnfTheory,
    preferences: list[ClassTerm] | None = None,
    k: int = 1,
    focus: list[ClassTerm] | None = None,
    *,
    corpus: SurveyCorpus | None = None,
    neighbor_limit: int = 3,
    node_limit: int | None = None,
    deadline: float | None = None,
) -> RecommendResult:
    """Generate up to k distinct unwritten-paper profiles.

    Focus terms are enforced as unit clauses. Returns fewer than k with
    exhausted=True when the solution space runs dry (count 0 before any
    generation means no papers remain at all).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    terms = default_preferences(theory) if preferences is None else preferences
    resolved = _resolve_terms(theory, terms)
    # contradictory focus literals are legal input: they surface as an
    # unsatisfiable theory (count 0 -> "no papers remain"), not an error
    focus_lits = [lit for _, lit in _resolve_terms(theory, focus or [], unique=False)]

    leaf_vars = [v.index for v in theory.leaf_variables]
    leaf_paths = [v.classpath for v in theory.leaf_variables]
    clauses: list = [list(c) for c in theory.all_clauses()]
    clauses.extend([lit] for lit in focus_lits)

    compile_kwargs = {"deadline": deadline}
    if node_limit is not None:
        compile_kwargs["node_limit"] = node_limit

    recommendations: list[Recommendation] = []
    exhausted = False
    for _ in range(k):
        graph = compile_theory(clauses, theory.var_count, **compile_kwargs)
        if count_models(graph) == 0:
            exhausted = True
            break
        satisfied: list[str] = []
        rejected: list[str] = []
        state = graph
        for term, lit in resolved:
            conditioned = condition(state, lit)
            if count_models(conditioned) > 0:
                state = conditioned
                satisfied.append(str(term))
            else:
                rejected.append(str(term))
        polarity = {abs(lit): lit > 0 for _, lit in resolved}
        model = extract_model(state, polarity=polarity)
        profile = tuple(model[v] for v in leaf_vars)
        clauses.append([-v if val else v for v, val in zip(leaf_vars, profile)])
        neighbors = (
            nearest_neighbors(profile, corpus, neighbor_limit) if corpus is not None else ()
        )
        recommendations.append(
            Recommendation(
                profile=profile,
                features=tuple(p for p, val in zip(leaf_paths, profile) if val),
                satisfied_preferences=tuple(satisfied),
                rejected_preferences=tuple(rejected),
                neighbors=tuple(neighbors),
            )
        )
    return RecommendResult(recommendations=tuple(recommendations), exhausted=exhausted)


def nearest_neighbors(
    profile: tuple[bool, ...], corpus: SurveyCorpus, limit: int = 3
) -> list[Neighbor]:
    """Closest known papers by Hamming distance over leaf profiles, ties by
    year descending then title; extend/relax partition the symmetric
    difference."""
    leaf_paths = [leaf.classpath for leaf in corpus.leaves]
    scored = []
    for paper, row in zip(corpus.papers, corpus.membership):
        extend = tuple(
            path for path, mine, theirs in zip(leaf_paths, profile, row) if mine and not theirs
        )
        relax = tuple(
            path for path, mine, theirs in zip(leaf_paths, profile, row) if theirs and not mine
        )
        distance = len(extend) + len(relax)
        year_key = -paper.year if paper.year is not None else float("inf")
        scored.append(
            (
                (distance, year_key, paper.title, paper.id),
                Neighbor(paper_id=paper.id, distance=distance, extend=extend, relax=relax),
            )
        )
    scored.sort(key=lambda pair: pair[0])
    return [neighbor for _, neighbor in scored[:limit]]
