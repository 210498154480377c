"""Knowledge compilation of CNF to d-DNNF, with counting and conditioning.

The compiler runs exhaustive DPLL: unit propagation to fixpoint, connected
component decomposition of the residual clauses (decomposable AND nodes),
and branching on the most frequent variable (deterministic OR nodes),
caching compiled components by their canonical clause list. The result
supports exact model counting (big integers throughout), literal
conditioning, consistency checks, and model extraction in time linear in
the graph.

Node encoding, children always preceding parents in the array:

    ("F",)              false
    ("T",)              true
    ("L", lit)          literal, signed variable index
    ("A", (ids...))     decomposable AND
    ("O", var, lo, hi)  decision OR: lo fixes var false, hi fixes var true
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

from .logic import CnfTheory

FALSE = 0
TRUE = 1

DEFAULT_NODE_LIMIT = 1_000_000


class CapacityError(RuntimeError):
    """The compiler hit its node budget or deadline; no answer is implied."""


class GraphInvariantError(AssertionError):
    """A produced graph failed the decomposability/determinism audit."""


@dataclass(frozen=True)
class DnnfGraph:
    nodes: tuple[tuple, ...]
    masks: tuple[int, ...]  # bit v-1 set iff variable v occurs in the subgraph
    root: int
    var_count: int
    fixed: tuple[int, ...] = ()  # literals applied via condition()

    @property
    def node_count(self) -> int:
        return len(self.nodes)


class _Builder:
    def __init__(self, var_count: int, node_limit: int | None, deadline: float | None):
        self.var_count = var_count
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes: list[tuple] = [("F",), ("T",)]
        self.masks: list[int] = [0, 0]
        self._intern: dict[tuple, int] = {}

    def _new(self, node: tuple, mask: int) -> int:
        existing = self._intern.get(node)
        if existing is not None:
            return existing
        if self.node_limit is not None and len(self.nodes) >= self.node_limit:
            raise CapacityError(f"node limit {self.node_limit} exceeded")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise CapacityError("compilation deadline exceeded")
        node_id = len(self.nodes)
        self.nodes.append(node)
        self.masks.append(mask)
        self._intern[node] = node_id
        return node_id

    def literal(self, lit: int) -> int:
        return self._new(("L", lit), 1 << (abs(lit) - 1))

    def conj(self, children) -> int:
        flat: list[int] = []
        for child in children:
            if child == FALSE:
                return FALSE
            if child == TRUE:
                continue
            node = self.nodes[child]
            if node[0] == "A":  # nested ANDs are kept flat
                flat.extend(node[1])
            else:
                flat.append(child)
        if not flat:
            return TRUE
        if len(flat) == 1:
            return flat[0]
        flat = sorted(set(flat))
        mask = 0
        for child in flat:
            child_mask = self.masks[child]
            if mask & child_mask:
                raise GraphInvariantError("AND children share variables")
            mask |= child_mask
        return self._new(("A", tuple(flat)), mask)

    def decision(self, var: int, lo: int, hi: int) -> int:
        if lo == FALSE and hi == FALSE:
            return FALSE
        if lo == FALSE:
            return hi
        if hi == FALSE:
            return lo
        mask = self.masks[lo] | self.masks[hi] | (1 << (var - 1))
        return self._new(("O", var, lo, hi), mask)

    def graph(self, root: int, fixed: tuple[int, ...] = ()) -> DnnfGraph:
        return DnnfGraph(
            nodes=tuple(self.nodes),
            masks=tuple(self.masks),
            root=root,
            var_count=self.var_count,
            fixed=fixed,
        )


def _canonical_clauses(clauses) -> tuple[tuple[int, ...], ...] | None:
    """Sorted, deduplicated clause tuples; tautologies dropped.
    Returns None if an empty clause makes the theory trivially unsat."""
    out = set()
    for clause in clauses:
        lits = frozenset(clause)
        if not lits:
            return None
        if any(-lit in lits for lit in lits):
            continue
        out.add(tuple(sorted(lits, key=lambda l: (abs(l), l))))
    return tuple(sorted(out))


def _unit_propagate(clauses):
    """Propagate unit clauses to fixpoint.

    Returns (implied literals sorted, residual clauses) or None on conflict.
    """
    implied: dict[int, bool] = {}
    current = clauses
    while True:
        units = {c[0] for c in current if len(c) == 1}
        if not units:
            break
        if any(-lit in units for lit in units):
            return None
        for lit in units:
            var = abs(lit)
            if var in implied and implied[var] != (lit > 0):
                return None
            implied[var] = lit > 0
        simplified = []
        for clause in current:
            if len(clause) == 1:
                continue
            keep = []
            satisfied = False
            for lit in clause:
                var = abs(lit)
                if var in implied:
                    if implied[var] == (lit > 0):
                        satisfied = True
                        break
                else:
                    keep.append(lit)
            if satisfied:
                continue
            if not keep:
                return None
            simplified.append(tuple(keep))
        current = tuple(simplified)
    lits = tuple(sorted((v if b else -v) for v, b in implied.items()))
    return lits, current


def _components(clauses):
    """Split clauses into variable-connected components, ordered by min var."""
    parent: dict[int, int] = {}

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for clause in clauses:
        vs = [abs(l) for l in clause]
        for v in vs:
            parent.setdefault(v, v)
        anchor = find(vs[0])
        for v in vs[1:]:
            parent[find(v)] = anchor

    groups: dict[int, list] = {}
    for clause in clauses:
        groups.setdefault(find(abs(clause[0])), []).append(clause)
    keyed = sorted(groups.values(), key=lambda g: min(abs(l) for c in g for l in c))
    return [tuple(sorted(set(g))) for g in keyed]


def _pick_var(clauses) -> int:
    counts: dict[int, int] = {}
    for clause in clauses:
        for lit in clause:
            var = abs(lit)
            counts[var] = counts.get(var, 0) + 1
    # max occurrence count; ties broken toward the lowest variable index
    return max(sorted(counts), key=lambda v: counts[v])


def _restrict(clauses, lit: int):
    """Clauses conditioned on lit; callers guarantee no unit clauses, so no
    immediate conflict is possible."""
    out = []
    for clause in clauses:
        if lit in clause:
            continue
        if -lit in clause:
            out.append(tuple(l for l in clause if l != -lit))
        else:
            out.append(clause)
    return tuple(sorted(set(out)))


def compile_theory(
    theory,
    var_count: int | None = None,
    *,
    node_limit: int | None = DEFAULT_NODE_LIMIT,
    use_cache: bool = True,
    deadline: float | None = None,
) -> DnnfGraph:
    """Compile a CnfTheory or an iterable of clauses into a d-DNNF graph.

    Unsatisfiable input compiles to the false node (count 0), never an error;
    exceeding node_limit or deadline raises CapacityError.
    """
    if isinstance(theory, CnfTheory):
        clauses = theory.all_clauses()
        var_count = theory.var_count
    else:
        clauses = theory
        if var_count is None:
            raise ValueError("var_count is required when compiling raw clauses")

    builder = _Builder(var_count, node_limit, deadline)
    canonical = _canonical_clauses(clauses)
    if canonical is None:
        return builder.graph(FALSE)

    cache: dict[tuple, int] = {}

    def compile_clauses(clause_set) -> int:
        propagated = _unit_propagate(clause_set)
        if propagated is None:
            return FALSE
        implied, residual = propagated
        parts = [builder.literal(lit) for lit in implied]
        for component in _components(residual) if residual else ():
            node = cache.get(component) if use_cache else None
            if node is None:
                node = compile_component(component)
                if use_cache:
                    cache[component] = node
            if node == FALSE:
                return FALSE
            parts.append(node)
        return builder.conj(parts)

    def compile_component(component) -> int:
        var = _pick_var(component)
        hi = builder.conj(
            [builder.literal(var), compile_clauses(_restrict(component, var))]
        )
        lo = builder.conj(
            [builder.literal(-var), compile_clauses(_restrict(component, -var))]
        )
        return builder.decision(var, lo, hi)

    root = compile_clauses(canonical)
    return builder.graph(root)


def _node_counts(g: DnnfGraph) -> list[int]:
    """Model count of each node over exactly its own variable scope."""
    counts = [0] * len(g.nodes)
    for i, node in enumerate(g.nodes):
        kind = node[0]
        if kind == "F":
            counts[i] = 0
        elif kind in ("T", "L"):
            counts[i] = 1
        elif kind == "A":
            total = 1
            for child in node[1]:
                total *= counts[child]
            counts[i] = total
        else:  # "O"
            _, _, lo, hi = node
            mask = g.masks[i]
            counts[i] = (counts[lo] << (mask & ~g.masks[lo]).bit_count()) + (
                counts[hi] << (mask & ~g.masks[hi]).bit_count()
            )
    return counts


def count_models(g: DnnfGraph) -> int:
    """Exact model count over the graph's free variables (var_count minus
    conditioned literals); unmentioned variables scale the count by 2 each."""
    counts = _node_counts(g)
    if counts[g.root] == 0:
        return 0
    free_gap = g.var_count - len(g.fixed) - g.masks[g.root].bit_count()
    return counts[g.root] << free_gap


def is_consistent(g: DnnfGraph) -> bool:
    return count_models(g) > 0


def _reachable(g: DnnfGraph) -> list[int]:
    seen = {g.root}
    stack = [g.root]
    while stack:
        node = g.nodes[stack.pop()]
        kind = node[0]
        children = node[1] if kind == "A" else node[2:4] if kind == "O" else ()
        for child in children:
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return sorted(seen)


def condition(g: DnnfGraph, lit: int) -> DnnfGraph:
    """Fix a literal: contradicting literal nodes become false, agreeing ones
    true, and the graph is simplified. Counting afterwards is over the
    remaining free variables."""
    var = abs(lit)
    if not 1 <= var <= g.var_count:
        raise ValueError(f"literal {lit} outside 1..{g.var_count}")
    if lit in g.fixed:
        return g
    if -lit in g.fixed or g.root == FALSE:
        builder = _Builder(g.var_count, None, None)
        return builder.graph(FALSE, fixed=g.fixed + (lit,))
    if not (g.masks[g.root] >> (var - 1)) & 1:
        return replace(g, fixed=g.fixed + (lit,))

    builder = _Builder(g.var_count, None, None)
    remap: dict[int, int] = {}
    for old_id in _reachable(g):
        node = g.nodes[old_id]
        kind = node[0]
        if kind == "F":
            new_id = FALSE
        elif kind == "T":
            new_id = TRUE
        elif kind == "L":
            if node[1] == lit:
                new_id = TRUE
            elif node[1] == -lit:
                new_id = FALSE
            else:
                new_id = builder.literal(node[1])
        elif kind == "A":
            new_id = builder.conj([remap[c] for c in node[1]])
        else:
            new_id = builder.decision(node[1], remap[node[2]], remap[node[3]])
        remap[old_id] = new_id
    return builder.graph(remap[g.root], fixed=g.fixed + (lit,))


def extract_model(g: DnnfGraph, polarity: dict[int, bool] | None = None) -> dict[int, bool]:
    """One satisfying full assignment.

    Decision branches prefer the side matching `polarity` when given, else
    the false branch; variables the graph leaves unconstrained default to
    false. Raises ValueError on an inconsistent graph.
    """
    counts = _node_counts(g)
    if count_models(g) == 0:
        raise ValueError("cannot extract a model from an inconsistent graph")
    assignment: dict[int, bool] = {abs(l): l > 0 for l in g.fixed}
    stack = [g.root]
    while stack:
        node = g.nodes[stack.pop()]
        kind = node[0]
        if kind == "L":
            assignment[abs(node[1])] = node[1] > 0
        elif kind == "A":
            stack.extend(node[1])
        elif kind == "O":
            var, lo, hi = node[1], node[2], node[3]
            want_high = bool(polarity.get(var, False)) if polarity else False
            first, second = (hi, lo) if want_high else (lo, hi)
            stack.append(first if counts[first] > 0 else second)
    for var in range(1, g.var_count + 1):
        assignment.setdefault(var, False)
    return assignment


def validate_graph(g: DnnfGraph) -> None:
    """Audit decomposability, decision determinism, and topological order.

    Raises GraphInvariantError on the first violation; used by the test
    suite on every compiled graph.
    """
    if not 0 <= g.root < len(g.nodes):
        raise GraphInvariantError("root out of range")
    masks: list[int] = []
    for i, node in enumerate(g.nodes):
        kind = node[0]
        if kind in ("F", "T"):
            masks.append(0)
        elif kind == "L":
            var = abs(node[1])
            if not 1 <= var <= g.var_count:
                raise GraphInvariantError(f"node {i}: literal {node[1]} out of range")
            masks.append(1 << (var - 1))
        elif kind == "A":
            mask = 0
            for child in node[1]:
                if child >= i:
                    raise GraphInvariantError(f"node {i}: child {child} not before parent")
                if mask & masks[child]:
                    raise GraphInvariantError(f"node {i}: AND children share variables")
                mask |= masks[child]
            masks.append(mask)
        elif kind == "O":
            var, lo, hi = node[1], node[2], node[3]
            for child in (lo, hi):
                if child >= i:
                    raise GraphInvariantError(f"node {i}: child {child} not before parent")
            if not _fixes(g, lo, var, False) or not _fixes(g, hi, var, True):
                raise GraphInvariantError(f"node {i}: OR children do not decide var {var}")
            masks.append(masks[lo] | masks[hi] | (1 << (var - 1)))
        else:
            raise GraphInvariantError(f"node {i}: unknown kind {kind!r}")
    fixed_mask = 0
    for lit in g.fixed:
        fixed_mask |= 1 << (abs(lit) - 1)
    if masks[g.root] & fixed_mask:
        raise GraphInvariantError("conditioned variable still occurs in the graph")


def _fixes_in(nodes, node_id: int, var: int, value: bool) -> bool:
    """True if every model of the node assigns var=value (syntactic check)."""
    node = nodes[node_id]
    kind = node[0]
    want = var if value else -var
    if kind == "F":
        return True
    if kind == "L":
        return node[1] == want
    if kind == "A":
        return any(nodes[c] == ("L", want) for c in node[1])
    return False


def _fixes(g: DnnfGraph, node_id: int, var: int, value: bool) -> bool:
    return _fixes_in(g.nodes, node_id, var, value)


def to_nnf(g: DnnfGraph) -> str:
    """Serialize to the c2d NNF text format (`nnf V E N` header, `L`/`A`/`O`
    node lines, root last). Conditioned literals are folded back in as unit
    conjuncts so external counters agree with count_models."""
    order = _reachable(g)
    remap = {old: new for new, old in enumerate(order)}
    lines = []
    edges = 0
    for old in order:
        node = g.nodes[old]
        kind = node[0]
        if kind == "F":
            lines.append("O 0 0")
        elif kind == "T":
            lines.append("A 0")
        elif kind == "L":
            lines.append(f"L {node[1]}")
        elif kind == "A":
            ids = [remap[c] for c in node[1]]
            edges += len(ids)
            lines.append("A " + " ".join(str(i) for i in [len(ids)] + ids))
        else:
            edges += 2
            lines.append(f"O {node[1]} 2 {remap[node[2]]} {remap[node[3]]}")
    if g.fixed and g.root != FALSE:
        root_line = remap[g.root]
        unit_ids = []
        for lit in sorted(g.fixed, key=lambda l: (abs(l), l)):
            unit_ids.append(len(lines))
            lines.append(f"L {lit}")
        children = ([] if g.root == TRUE else [root_line]) + unit_ids
        edges += len(children)
        lines.append("A " + " ".join(str(i) for i in [len(children)] + children))
    return f"nnf {len(lines)} {edges} {g.var_count}\n" + "\n".join(lines) + "\n"


def from_nnf(text: str) -> DnnfGraph:
    """Parse the c2d NNF text format back into a validated graph."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines or not lines[0].startswith("nnf"):
        raise ValueError("missing 'nnf V E N' header")
    header = lines[0].split()
    if len(header) != 4:
        raise ValueError(f"malformed header {lines[0]!r}")
    declared_nodes, _, var_count = (int(x) for x in header[1:])
    body = lines[1:]
    if len(body) != declared_nodes:
        raise ValueError(f"expected {declared_nodes} node lines, got {len(body)}")
    if not body:
        raise ValueError("empty graph")

    builder = _Builder(var_count, None, None)
    ids: list[int] = []
    for lineno, line in enumerate(body):
        fields = line.split()
        kind = fields[0]
        if kind == "L":
            ids.append(builder.literal(int(fields[1])))
        elif kind == "A":
            n = int(fields[1])
            children = [int(x) for x in fields[2 : 2 + n]]
            if any(c >= lineno for c in children):
                raise ValueError(f"node {lineno}: forward reference")
            ids.append(TRUE if n == 0 else builder.conj([ids[c] for c in children]))
        elif kind == "O":
            var, n = int(fields[1]), int(fields[2])
            if n == 0:
                ids.append(FALSE)
            elif n == 2 and var > 0:
                lo, hi = (int(x) for x in fields[3:5])
                if lo >= lineno or hi >= lineno:
                    raise ValueError(f"node {lineno}: forward reference")
                lo_id, hi_id = ids[lo], ids[hi]
                # Children may come in either polarity order; normalize so
                # the first child is the var=false branch.
                if not _fixes_in(builder.nodes, lo_id, var, False) and _fixes_in(
                    builder.nodes, lo_id, var, True
                ):
                    lo_id, hi_id = hi_id, lo_id
                ids.append(builder.decision(var, lo_id, hi_id))
            else:
                raise ValueError(f"node {lineno}: only binary decision OR nodes supported")
        else:
            raise ValueError(f"node {lineno}: unknown kind {kind!r}")
    graph = builder.graph(ids[-1])
    validate_graph(graph)
    return graph
