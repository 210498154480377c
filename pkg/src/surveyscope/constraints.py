"""Line-oriented constraint DSL over taxonomy classpaths.

Grammar, one directive per logical line:

    line := kind ':' term (',' term)*
    term := ['~'] segment (' > ' segment)*
    kind := 'implies' | 'atmostone' | 'atleastone'

A line starting with whitespace continues the previous directive's term
list. Blank lines are ignored and '#' starts a comment line. Segment
matching is case-sensitive after trimming.
"""

from __future__ import annotations

from dataclasses import dataclass

KINDS = ("implies", "atmostone", "atleastone")


class ConstraintError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ClassTerm:
    negated: bool
    path: str  # classpath, segments joined by " > "

    def __str__(self) -> str:
        return ("~" if self.negated else "") + self.path


@dataclass(frozen=True)
class ConstraintDirective:
    kind: str
    terms: tuple[ClassTerm, ...]
    source_line: int

    def __str__(self) -> str:
        return f"{self.kind}:{','.join(str(t) for t in self.terms)}"


def parse_term(raw: str) -> ClassTerm:
    """Parse one signed classpath term; raises ValueError on an empty term."""
    text = raw.strip()
    negated = text.startswith("~")
    if negated:
        text = text[1:].strip()
    if not text:
        raise ValueError("empty term")
    path = " > ".join(seg.strip() for seg in text.split(" > "))
    return ClassTerm(negated=negated, path=path)


def parse_constraints(text: str) -> list[ConstraintDirective]:
    # Logical line = first physical line plus whitespace-led continuations;
    # fragments keep their physical line numbers for error reporting.
    logical: list[list[tuple[int, str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if raw[0] in " \t":
            if not logical:
                raise ConstraintError(lineno, "continuation line without a directive")
            logical[-1].append((lineno, raw.strip()))
        else:
            logical.append([(lineno, raw.strip())])

    directives = []
    for fragments in logical:
        directives.append(_parse_logical_line(fragments))
    return directives


def _parse_logical_line(fragments: list[tuple[int, str]]) -> ConstraintDirective:
    first_line, head = fragments[0]
    if ":" not in head:
        raise ConstraintError(first_line, f"expected 'kind:terms', got {head!r}")
    kind, _, rest = head.partition(":")
    kind = kind.strip()
    if kind not in KINDS:
        raise ConstraintError(first_line, f"unknown directive {kind!r}")

    # Track the physical line of each term for precise errors.
    pieces = [(first_line, rest)] + fragments[1:]
    terms: list[ClassTerm] = []
    for idx, (lineno, piece) in enumerate(pieces):
        raw_terms = piece.split(",")
        for j, raw_term in enumerate(raw_terms):
            if not raw_term.strip():
                # A trailing comma hands the term over to the next fragment.
                if j == len(raw_terms) - 1 and idx < len(pieces) - 1:
                    continue
                raise ConstraintError(lineno, "empty term")
            terms.append(parse_term(raw_term))

    if kind == "implies" and len(terms) < 2:
        raise ConstraintError(first_line, "implies needs at least 2 terms")
    if not terms:
        raise ConstraintError(first_line, f"{kind} needs at least 1 term")
    if kind in ("atmostone", "atleastone"):
        for term in terms:
            if term.negated:
                raise ConstraintError(
                    first_line, f"negated term {term.path!r} not allowed in {kind}"
                )

    return ConstraintDirective(kind=kind, terms=tuple(terms), source_line=first_line)


def format_directives(directives: list[ConstraintDirective]) -> str:
    """Pretty-print directives; parse(format(parse(x))) == parse(x)."""
    return "\n".join(str(d) for d in directives) + ("\n" if directives else "")
