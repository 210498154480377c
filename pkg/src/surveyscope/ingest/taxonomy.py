"""Taxonomy tree construction from spreadsheet header rows.

Merged header cells export to CSV as a value followed by blanks, so a blank
cell inherits the nearest non-blank cell to its left -- but only within the
column span of its parent one row up. Each maximal run of one value becomes
a child of the node whose span contains it. The deepest labelled cell in
each column is that column's leaf class.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class TaxonomyError(ValueError):
    """Raised when the header grid does not describe a consistent hierarchy."""


@dataclass
class TaxonomyNode:
    id: int
    label: str
    path: tuple[str, ...]
    column_span: tuple[int, int]  # inclusive sheet columns
    children: list["TaxonomyNode"] = field(default_factory=list)

    @property
    def classpath(self) -> str:
        return " > ".join(self.path)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def iter_nodes(self):
        """Pre-order walk, self first."""
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def leaves(self) -> list["TaxonomyNode"]:
        return [n for n in self.iter_nodes() if n.is_leaf]

    def find(self, classpath: str) -> "TaxonomyNode | None":
        segments = tuple(seg.strip() for seg in classpath.split(" > "))
        for node in self.iter_nodes():
            if node.path == segments:
                return node
        return None


def _cell(grid: list[list[str | None]], row: int, col: int) -> str:
    if row < len(grid) and col < len(grid[row]):
        value = grid[row][col]
        return value.strip() if value else ""
    return ""


def build_taxonomy(
    grid: list[list[str | None]],
    rows: tuple[int, int],
    cols: tuple[int, int],
) -> TaxonomyNode:
    """Build the taxonomy tree from header cells in the given inclusive ranges.

    Raises TaxonomyError if a label run straddles two parents, if an internal
    node's span is only partially covered by deeper labels, or if two nodes
    end up with the same root-to-node label path.
    """
    row_start, row_stop = rows
    col_start, col_stop = cols
    root = TaxonomyNode(id=0, label="", path=(), column_span=(col_start, col_stop))

    # Nodes whose spans partition the current frontier, keyed by column.
    parent_of_col: dict[int, TaxonomyNode] = {c: root for c in range(col_start, col_stop + 1)}

    for row in range(row_start, row_stop + 1):
        # Leftward blank inheritance, restricted to each parent's span.
        filled: dict[int, str] = {}
        explicit: dict[int, bool] = {}
        for col in range(col_start, col_stop + 1):
            value = _cell(grid, row, col)
            if value:
                filled[col] = value
                explicit[col] = True
            else:
                left = col - 1
                if left in filled and parent_of_col[left] is parent_of_col[col]:
                    filled[col] = filled[left]
                    explicit[col] = False

        # Maximal runs of one value across the whole row; a run crossing a
        # parent boundary means a header cell merged over two classes.
        runs: list[tuple[int, int, str]] = []
        col = col_start
        while col <= col_stop:
            if col not in filled:
                col += 1
                continue
            run_start = col
            value = filled[col]
            while col + 1 <= col_stop and filled.get(col + 1) == value:
                col += 1
            runs.append((run_start, col, value))
            col += 1

        new_parent_of_col: dict[int, TaxonomyNode] = dict(parent_of_col)
        children_seen: dict[int, bool] = {}
        for run_start, run_end, value in runs:
            owners = {id(parent_of_col[c]): parent_of_col[c] for c in range(run_start, run_end + 1)}
            if len(owners) > 1:
                names = sorted(n.classpath or "(root)" for n in owners.values())
                raise TaxonomyError(
                    f"header row {row}: label {value!r} spans columns {run_start}-{run_end}, "
                    f"crossing the boundary between {' and '.join(names)}"
                )
            parent = parent_of_col[run_start]
            node = TaxonomyNode(
                id=-1,
                label=value,
                path=parent.path + (value,),
                column_span=(run_start, run_end),
            )
            parent.children.append(node)
            children_seen[id(parent)] = True
            for c in range(run_start, run_end + 1):
                new_parent_of_col[c] = node

        # A parent that gained children must be fully covered by them,
        # otherwise its span would not equal the union of its children's.
        for run_start, run_end, _ in runs:
            parent = parent_of_col[run_start]
            uncovered = [
                c
                for c in range(parent.column_span[0], parent.column_span[1] + 1)
                if new_parent_of_col[c] is parent
            ]
            if uncovered:
                raise TaxonomyError(
                    f"header row {row}: columns {uncovered} under "
                    f"{parent.classpath or '(root)'!r} have no label while siblings do"
                )

        parent_of_col = new_parent_of_col

    _assign_ids(root)
    _check_invariants(root)
    return root


def _assign_ids(root: TaxonomyNode) -> None:
    for i, node in enumerate(root.iter_nodes()):
        node.id = i


def _check_invariants(root: TaxonomyNode) -> None:
    seen: dict[str, TaxonomyNode] = {}
    for node in root.iter_nodes():
        if node is root:
            continue
        if node.is_leaf and node.column_span[0] != node.column_span[1]:
            raise TaxonomyError(
                f"leaf {node.classpath!r} spans columns "
                f"{node.column_span[0]}-{node.column_span[1]}; leaves must span one column"
            )
        if node.classpath in seen:
            raise TaxonomyError(f"duplicate classpath {node.classpath!r}")
        seen[node.classpath] = node


def taxonomy_to_dict(node: TaxonomyNode) -> dict:
    return {
        "label": node.label,
        "column_span": list(node.column_span),
        "children": [taxonomy_to_dict(c) for c in node.children],
    }


def taxonomy_from_dict(data: dict, path: tuple[str, ...] = ()) -> TaxonomyNode:
    label = data["label"]
    node_path = path + (label,) if label else path
    node = TaxonomyNode(
        id=-1,
        label=label,
        path=node_path,
        column_span=tuple(data["column_span"]),  # type: ignore[arg-type]
    )
    node.children = [taxonomy_from_dict(c, node_path) for c in data.get("children", [])]
    if not path and not label:
        _assign_ids(node)
    return node
