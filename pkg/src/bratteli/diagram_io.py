"""The ``.bd`` text format and Graphviz DOT export.

Grammar (line oriented; ``#`` starts a comment)::

    bratteli v1
    levels L
    sizes k0 k1 ... k(L-1)
    matrix n            # for n = 0 .. L-2, followed by k(n+1) rows of k(n) integers
    stationary          # optional: the last matrix repeats forever
    order n j: i.t ...  # optional: incoming-edge order of vertex j at level n

Row ``j`` of ``matrix n`` lists the edges INTO vertex ``j`` of level ``n+1``;
column ``i`` counts those coming FROM vertex ``i`` of level ``n``.  Order
tokens are ``source.copy`` with 1-based copy indices, smallest edge first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .diagram import BratteliDiagram, dims, validate
from .errors import InvalidOrder, ParseError, ValidationError
from .vershik import Edge, OrderedBratteliDiagram, non_default_orders, with_orders

FORMAT_VERSION = 1
ORIENTATION_COMMENT = (
    "matrix n: row j = edges into vertex j of level n+1, column i = edges from vertex i of level n"
)

_TOKEN = re.compile(r"\S+")
_KEYWORDS = frozenset({"bratteli", "levels", "sizes", "matrix", "stationary", "order"})


@dataclass(frozen=True)
class DiagramDocument:
    diagram: BratteliDiagram
    # only orders that differ from the lexicographic default
    orders: dict[tuple[int, int], tuple[Edge, ...]] = field(default_factory=dict)
    comments: tuple[str, ...] = ()
    version: int = FORMAT_VERSION

    def ordered(self) -> OrderedBratteliDiagram:
        return with_orders(self.diagram, self.orders)

    @classmethod
    def from_ordered(cls, od: OrderedBratteliDiagram, comments=()) -> DiagramDocument:
        return cls(od.diagram, non_default_orders(od), tuple(comments))


def _tokens(line: str) -> list[tuple[int, str]]:
    """(1-based column, token) pairs, with any trailing comment removed."""
    body = line.split("#", 1)[0]
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(body)]


def _int(tok: tuple[int, str], lineno: int, what: str) -> int:
    col, text = tok
    if not re.fullmatch(r"[+-]?\d+", text):
        raise ParseError(lineno, col, f"expected {what}, got {text!r}")
    return int(text)


def parse_bd(text: str) -> DiagramDocument:
    lines = text.splitlines()
    comments: list[str] = []
    content: list[tuple[int, str, list[tuple[int, str]]]] = []
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            note = stripped[1:].strip()
            if note != ORIENTATION_COMMENT:
                comments.append(note)
            continue
        content.append((lineno, line, _tokens(line)))

    end_line = len(lines) + 1
    pos = 0

    def peek():
        return content[pos] if pos < len(content) else None

    def take(keyword: str):
        nonlocal pos
        item = peek()
        if item is None:
            raise ParseError(end_line, 1, f"expected '{keyword}' line, got end of input")
        lineno, _, toks = item
        if toks[0][1] != keyword:
            raise ParseError(lineno, toks[0][0], f"expected '{keyword}', got {toks[0][1]!r}")
        pos += 1
        return lineno, toks

    lineno, toks = take("bratteli")
    if len(toks) != 2 or toks[1][1] != f"v{FORMAT_VERSION}":
        col = toks[1][0] if len(toks) > 1 else len(content[0][1]) + 1
        raise ParseError(lineno, col, f"unsupported format version, expected 'bratteli v{FORMAT_VERSION}'")

    lineno, toks = take("levels")
    if len(toks) != 2:
        raise ParseError(lineno, toks[0][0], "'levels' takes exactly one integer")
    n_levels = _int(toks[1], lineno, "level count")
    if n_levels < 1:
        raise ParseError(lineno, toks[1][0], "prefix length must be at least 1", "EmptyDiagram")

    lineno, toks = take("sizes")
    sizes_line = lineno
    if len(toks) - 1 != n_levels:
        col = toks[n_levels + 1][0] if len(toks) - 1 > n_levels else len(content[pos - 1][1]) + 1
        raise ParseError(
            lineno, col, f"'sizes' lists {len(toks) - 1} levels, 'levels' says {n_levels}", "ShapeMismatch"
        )
    sizes = [_int(t, lineno, "level size") for t in toks[1:]]
    for (col, _), k in zip(toks[1:], sizes):
        if k < 1:
            raise ParseError(lineno, col, "level sizes must be positive", "ShapeMismatch")

    matrices = []
    matrix_lines: list[int] = []
    row_lines: list[list[int]] = []
    for n in range(n_levels - 1):
        lineno, toks = take("matrix")
        if len(toks) != 2 or _int(toks[1], lineno, "matrix index") != n:
            raise ParseError(lineno, toks[0][0], f"expected 'matrix {n}'")
        matrix_lines.append(lineno)
        rows, rl = [], []
        for j in range(sizes[n + 1]):
            item = peek()
            if item is None or item[2][0][1] in _KEYWORDS:
                where = item[0] if item else end_line
                raise ParseError(
                    where, 1,
                    f"matrix {n} has {j} rows, level {n + 1} has {sizes[n + 1]} vertices",
                    "ShapeMismatch",
                )
            rlineno, _, rtoks = item
            if len(rtoks) != sizes[n]:
                col = rtoks[sizes[n]][0] if len(rtoks) > sizes[n] else rtoks[-1][0]
                raise ParseError(
                    rlineno, col,
                    f"matrix {n} row {j} has {len(rtoks)} entries, level {n} has {sizes[n]} vertices",
                    "ShapeMismatch",
                )
            row = []
            for tok in rtoks:
                v = _int(tok, rlineno, "multiplicity")
                if v < 0:
                    raise ParseError(rlineno, tok[0], "multiplicities must be non-negative", "BadEntry")
                row.append(v)
            rows.append(row)
            rl.append(rlineno)
            pos += 1
        item = peek()
        if item is not None and re.fullmatch(r"[+-]?\d+", item[2][0][1]):
            raise ParseError(
                item[0], 1,
                f"matrix {n} has more than {sizes[n + 1]} rows, level {n + 1} has {sizes[n + 1]} vertices",
                "ShapeMismatch",
            )
        matrices.append(rows)
        row_lines.append(rl)

    stationary = False
    stationary_line = None
    item = peek()
    if item is not None and item[2][0][1] == "stationary":
        if len(item[2]) != 1:
            raise ParseError(item[0], item[2][1][0], "'stationary' takes no arguments")
        stationary = True
        stationary_line = item[0]
        pos += 1

    raw_orders: dict[tuple[int, int], tuple[Edge, ...]] = {}
    order_lines: dict[tuple[int, int], int] = {}
    while (item := peek()) is not None:
        lineno, line, toks = item
        if toks[0][1] != "order":
            raise ParseError(lineno, toks[0][0], f"unexpected {toks[0][1]!r}")
        if len(toks) < 3 or not toks[2][1].endswith(":"):
            raise ParseError(lineno, toks[0][0], "expected 'order n j: i.t ...'")
        level = _int(toks[1], lineno, "level")
        vertex = _int((toks[2][0], toks[2][1][:-1]), lineno, "vertex")
        edges = []
        for col, tok in toks[3:]:
            m = re.fullmatch(r"(\d+)\.(\d+)", tok)
            if not m:
                raise ParseError(lineno, col, f"edge token {tok!r} is not source.copy")
            edges.append((int(m.group(1)), int(m.group(2))))
        if (level, vertex) in raw_orders:
            raise ParseError(lineno, toks[0][0], f"second order for vertex {vertex} at level {level}", "InvalidOrder")
        if not 1 <= level < n_levels or not 0 <= vertex < sizes[level]:
            raise ParseError(lineno, toks[1][0], f"no vertex {vertex} at level {level}", "InvalidOrder")
        raw_orders[(level, vertex)] = tuple(edges)
        order_lines[(level, vertex)] = lineno
        pos += 1

    try:
        diagram = validate(sizes, matrices, stationary)
    except ValidationError as err:
        if err.matrix is not None and err.row is not None and err.matrix < len(row_lines):
            where = row_lines[err.matrix][err.row]
        elif err.matrix is not None and err.matrix < len(matrix_lines):
            where = stationary_line if err.kind == "NonSquareTail" and stationary_line else matrix_lines[err.matrix]
        elif err.kind == "NonSquareTail" and stationary_line:
            where = stationary_line
        else:
            where = sizes_line
        raise ParseError(where, 1, str(err), err.kind) from err

    try:
        od = with_orders(diagram, raw_orders)
    except InvalidOrder as err:
        key = (err.matrix + 1, err.row) if err.matrix is not None else None
        raise ParseError(order_lines.get(key, end_line), 1, str(err), err.kind) from err
    return DiagramDocument(diagram, non_default_orders(od), tuple(comments))


def serialize_bd(document: DiagramDocument | BratteliDiagram) -> str:
    """Canonical text: single spaces, no trailing blanks, LF endings, default orders omitted."""
    if isinstance(document, BratteliDiagram):
        document = DiagramDocument(document)
    d = document.diagram
    out = [f"bratteli v{document.version}"]
    out += [f"# {c}" if c else "#" for c in document.comments]
    out.append(f"# {ORIENTATION_COMMENT}")
    out.append(f"levels {d.num_levels}")
    out.append("sizes " + " ".join(map(str, d.level_sizes)))
    for n, m in enumerate(d.matrices):
        out.append(f"matrix {n}")
        out += [" ".join(map(str, row)) for row in m]
    if d.stationary_tail:
        out.append("stationary")
    od = with_orders(d, document.orders)
    for (level, vertex), order in non_default_orders(od).items():
        out.append(f"order {level} {vertex}: " + " ".join(f"{i}.{t}" for i, t in order))
    return "\n".join(out) + "\n"


def export_dot(
    diagram: BratteliDiagram,
    depth: int | None = None,
    expand: bool = False,
    name: str = "bratteli",
) -> str:
    """DOT digraph with nodes ``L<n>_<v>`` labelled by their exact dimensions.

    Parallel edges collapse to one edge labelled with the multiplicity unless
    ``expand`` is set.  ``depth`` defaults to the stored prefix.
    """
    if depth is None:
        depth = diagram.last_level
    diagram.size(depth)  # raises LevelOutOfRange past a finite prefix
    out = [f"digraph {name} {{", "  rankdir=TB;", "  node [shape=circle];"]
    for n in range(depth + 1):
        labels = " ".join(
            f'L{n}_{v} [label="{d}"];' for v, d in enumerate(dims(diagram, n).values)
        )
        out.append(f"  {{ rank=same; {labels} }}")
    for n in range(depth):
        m = diagram.matrix(n)
        for i in range(diagram.size(n)):
            for j in range(diagram.size(n + 1)):
                mult = m[j][i]
                if not mult:
                    continue
                if expand:
                    out += [f"  L{n}_{i} -> L{n + 1}_{j};"] * mult
                elif mult > 1:
                    out.append(f'  L{n}_{i} -> L{n + 1}_{j} [label="{mult}"];')
                else:
                    out.append(f"  L{n}_{i} -> L{n + 1}_{j};")
    out.append("}")
    return "\n".join(out) + "\n"
