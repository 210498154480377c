"""CNF theory over taxonomy classes.

One boolean variable per taxonomy node of the default taxonomy (root
excluded), leaf and internal alike. Structural clauses tie every class to
its children so that internal variables equal the OR of their leaves in
every model; semantic clauses come from the author's constraint file; one
blocking clause per distinct known leaf profile rules the existing
literature out of the solution space.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constraints import ConstraintDirective
from .ingest.corpus import SurveyCorpus
from .ingest.taxonomy import TaxonomyNode

Clause = frozenset[int]  # signed variable indices; positive = class present

# Provenance source tags
HIERARCHY = "hierarchy"
DSL = "dsl"
PAPERS = "papers"


class TheoryError(ValueError):
    """Raised for unresolvable classpaths or malformed theory input."""


@dataclass(frozen=True)
class Variable:
    index: int  # 1-based, contiguous
    classpath: str
    is_leaf: bool


@dataclass(frozen=True)
class Violation:
    paper_id: int
    clause: Clause
    provenance: tuple

    def describe(self) -> str:
        kind = self.provenance[0]
        if kind == DSL:
            return f"constraint line {self.provenance[1]}: {self.provenance[2]}"
        if kind == HIERARCHY:
            return f"hierarchy edge {self.provenance[1]} -> {self.provenance[2]}"
        return str(self.provenance)


@dataclass
class CnfTheory:
    variables: tuple[Variable, ...]
    structural: tuple[Clause, ...]
    semantic: tuple[Clause, ...]
    blocking: tuple[Clause, ...]
    provenance: dict[Clause, tuple]

    @property
    def var_count(self) -> int:
        return len(self.variables)

    @property
    def leaf_variables(self) -> list[Variable]:
        return [v for v in self.variables if v.is_leaf]

    def all_clauses(self, include_blocking: bool = True) -> list[Clause]:
        groups = [self.structural, self.semantic]
        if include_blocking:
            groups.append(self.blocking)
        seen: set[Clause] = set()
        out: list[Clause] = []
        for group in groups:
            for clause in group:
                if clause not in seen:
                    seen.add(clause)
                    out.append(clause)
        return out

    def variable_by_classpath(self, classpath: str) -> Variable:
        for var in self.variables:
            if var.classpath == classpath:
                return var
        raise TheoryError(f"unknown classpath {classpath!r}")


def make_clause(literals) -> Clause | None:
    """Set-normalize literals; returns None for tautologies."""
    clause = frozenset(literals)
    if not clause:
        raise TheoryError("empty clause")
    if any(-lit in clause for lit in clause):
        return None
    return clause


def _variable_map(root: TaxonomyNode) -> tuple[tuple[Variable, ...], dict[str, int], dict[int, int]]:
    """Variables in pre-order; maps classpath -> index and node id -> index."""
    variables: list[Variable] = []
    by_path: dict[str, int] = {}
    by_node: dict[int, int] = {}
    index = 0
    for node in root.iter_nodes():
        if node is root:
            continue
        index += 1
        variables.append(Variable(index=index, classpath=node.classpath, is_leaf=node.is_leaf))
        by_path[node.classpath] = index
        by_node[node.id] = index
    return tuple(variables), by_path, by_node


def build_theory(corpus: SurveyCorpus, directives: list[ConstraintDirective]) -> CnfTheory:
    root = corpus.default_taxonomy.root
    variables, by_path, by_node = _variable_map(root)
    provenance: dict[Clause, list] = {}

    def record(clause: Clause | None, source: tuple, bucket: list[Clause]) -> None:
        if clause is None:
            return
        if clause not in provenance:
            provenance[clause] = []
            bucket.append(clause)
        elif clause not in bucket:
            bucket.append(clause)
        provenance[clause].append(source)

    structural: list[Clause] = []
    for node in root.iter_nodes():
        if node is root or not node.children:
            continue
        p = by_node[node.id]
        child_vars = [by_node[c.id] for c in node.children]
        for child, cv in zip(node.children, child_vars):
            record(
                make_clause([-cv, p]),
                (HIERARCHY, node.classpath, child.classpath),
                structural,
            )
        record(
            make_clause([-p] + child_vars),
            (HIERARCHY, node.classpath, "children"),
            structural,
        )

    semantic: list[Clause] = []
    for directive in directives:
        for clause, source in _directive_clauses(directive, by_path, root):
            record(clause, source, semantic)

    blocking: list[Clause] = []
    leaf_vars = [v.index for v in variables if v.is_leaf]
    by_profile: dict[tuple[bool, ...], list[int]] = {}
    for paper, profile in zip(corpus.papers, corpus.membership):
        by_profile.setdefault(profile, []).append(paper.id)
    for profile, paper_ids in by_profile.items():
        clause = make_clause(
            [-v if marked else v for v, marked in zip(leaf_vars, profile)]
        )
        record(clause, (PAPERS, tuple(paper_ids)), blocking)

    return CnfTheory(
        variables=variables,
        structural=tuple(structural),
        semantic=tuple(semantic),
        blocking=tuple(blocking),
        provenance={c: tuple(s) for c, s in provenance.items()},
    )


def _resolve(path: str, by_path: dict[str, int], line: int) -> int:
    if path not in by_path:
        raise TheoryError(f"line {line}: classpath {path!r} does not resolve")
    return by_path[path]


def _directive_clauses(directive: ConstraintDirective, by_path: dict[str, int], root: TaxonomyNode):
    source = (DSL, directive.source_line, str(directive))
    line = directive.source_line

    if directive.kind == "implies":
        lits = [
            (-1 if t.negated else 1) * _resolve(t.path, by_path, line) for t in directive.terms
        ]
        for a, b in zip(lits, lits[1:]):
            yield make_clause([-a, b]), source
    elif directive.kind == "atleastone":
        yield make_clause(
            [_resolve(t.path, by_path, line) for t in directive.terms]
        ), source
    elif directive.kind == "atmostone":
        if len(directive.terms) == 1:
            # A lone internal-node term expands to at-most-one of its children.
            node = root.find(directive.terms[0].path)
            if node is None:
                raise TheoryError(
                    f"line {line}: classpath {directive.terms[0].path!r} does not resolve"
                )
            variables = [_resolve(c.classpath, by_path, line) for c in node.children]
        else:
            variables = [_resolve(t.path, by_path, line) for t in directive.terms]
        for i in range(len(variables)):
            for j in range(i + 1, len(variables)):
                yield make_clause([-variables[i], -variables[j]]), source
    else:  # pragma: no cover - parser rejects unknown kinds
        raise TheoryError(f"line {line}: unknown directive kind {directive.kind!r}")


def paper_assignment(corpus: SurveyCorpus, paper_index: int) -> dict[int, bool]:
    """Full assignment for a known paper: leaves from the membership row,
    internal classes true iff any descendant leaf is true."""
    root = corpus.default_taxonomy.root
    _, _, by_node = _variable_map(root)
    leaf_ids = [leaf.id for leaf in root.leaves()]
    profile = corpus.membership[paper_index]
    value_by_node: dict[int, bool] = dict(zip(leaf_ids, profile))

    def fill(node: TaxonomyNode) -> bool:
        if node.id in value_by_node:
            return value_by_node[node.id]
        child_values = [fill(child) for child in node.children]  # no short-circuit
        value = any(child_values)
        value_by_node[node.id] = value
        return value

    for child in root.children:
        fill(child)
    return {by_node[nid]: val for nid, val in value_by_node.items()}


def evaluate_clause(clause: Clause, assignment: dict[int, bool]) -> bool:
    return any(assignment.get(abs(lit), False) == (lit > 0) for lit in clause)


def validate_papers(
    corpus: SurveyCorpus, directives: list[ConstraintDirective]
) -> list[Violation]:
    """Check every known paper's full assignment against structural and
    semantic clauses; an empty report means the data is consistent."""
    return validate_against(corpus, build_theory(corpus, directives))


def validate_against(corpus: SurveyCorpus, theory: CnfTheory) -> list[Violation]:
    clauses = theory.all_clauses(include_blocking=False)
    violations: list[Violation] = []
    for i, paper in enumerate(corpus.papers):
        assignment = paper_assignment(corpus, i)
        for clause in clauses:
            if not evaluate_clause(clause, assignment):
                # a blocking clause can coincide with a semantic one; only
                # hierarchy/DSL sources name the constraint being broken
                sources = [
                    s
                    for s in theory.provenance.get(clause, ())
                    if s[0] in (HIERARCHY, DSL)
                ] or [("unknown",)]
                for source in sources:
                    violations.append(
                        Violation(paper_id=paper.id, clause=clause, provenance=source)
                    )
    return violations


def export_dimacs(theory: CnfTheory) -> str:
    """Standard DIMACS CNF with the variable map and per-clause provenance
    recorded as comments."""
    lines = []
    for var in theory.variables:
        kind = "leaf" if var.is_leaf else "internal"
        lines.append(f"c var {var.index} = {var.classpath!r} ({kind})")
    clauses = theory.all_clauses()
    lines.append(f"p cnf {theory.var_count} {len(clauses)}")
    for clause in clauses:
        for source in theory.provenance.get(clause, ()):
            lines.append(f"c {_describe_source(source)}")
        lits = sorted(clause, key=lambda l: (abs(l), l))
        lines.append(" ".join(str(l) for l in lits) + " 0")
    return "\n".join(lines) + "\n"


def _describe_source(source: tuple) -> str:
    kind = source[0]
    if kind == HIERARCHY:
        return f"hierarchy: {source[1] or '(root)'} -> {source[2]}"
    if kind == DSL:
        return f"dsl line {source[1]}: {source[2]}"
    if kind == PAPERS:
        return f"papers: {', '.join(str(p) for p in source[1])}"
    return str(source)


def theory_to_dict(theory: CnfTheory) -> dict:
    def group(clauses: tuple[Clause, ...], name: str) -> list[dict]:
        return [
            {
                "literals": sorted(c, key=lambda l: (abs(l), l)),
                "group": name,
                "sources": [list(s) for s in theory.provenance.get(c, ())],
            }
            for c in clauses
        ]

    return {
        "variables": [
            {"index": v.index, "classpath": v.classpath, "is_leaf": v.is_leaf}
            for v in theory.variables
        ],
        "clauses": (
            group(theory.structural, "structural")
            + group(theory.semantic, "semantic")
            + group(theory.blocking, "blocking")
        ),
    }


def theory_from_dict(data: dict) -> CnfTheory:
    variables = tuple(
        Variable(index=v["index"], classpath=v["classpath"], is_leaf=v["is_leaf"])
        for v in data["variables"]
    )
    groups: dict[str, list[Clause]] = {"structural": [], "semantic": [], "blocking": []}
    provenance: dict[Clause, list] = {}
    for entry in data["clauses"]:
        clause = frozenset(entry["literals"])
        groups[entry["group"]].append(clause)
        sources = provenance.setdefault(clause, [])
        for src in entry["sources"]:
            sources.append(tuple(tuple(x) if isinstance(x, list) else x for x in src))
    return CnfTheory(
        variables=variables,
        structural=tuple(groups["structural"]),
        semantic=tuple(groups["semantic"]),
        blocking=tuple(groups["blocking"]),
        provenance={c: tuple(s) for c, s in provenance.items()},
    )
