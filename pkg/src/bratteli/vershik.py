"""Ordered Bratteli diagrams and the Vershik (adic) successor on finite paths.

An edge into vertex ``j`` of level ``n`` is identified by ``(i, t)``: its
source ``i`` at level ``n - 1`` and a 1-based copy index ``t`` among the
``M[j][i]`` parallel edges.  Each vertex carries a total order on its incoming
edges.  For stationary diagrams the order given for the last stored level is
reused at every deeper level.

Finite paths stand in for infinite ones.  At depth ``n`` the successor of an
all-maximal path ending at vertex ``j`` is the all-minimal path ending at
vertex ``j + 1`` (wrapping to vertex 0), which turns the depth-``n`` map into
a single cycle through every path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import intmat
from .diagram import BratteliDiagram, dims
from .errors import InvalidOrder, InvalidPath, LevelOutOfRange, NotPrimitive
from .quadratic import QuadraticNumber
from .spectral import perron_bracket

Edge = tuple[int, int]


def incoming_edges(diagram: BratteliDiagram, level: int, vertex: int) -> tuple[Edge, ...]:
    """Incoming edges of ``vertex`` at ``level`` in lexicographic order."""
    row = diagram.matrix(level - 1)[vertex]
    return tuple((i, t) for i, m in enumerate(row) for t in range(1, m + 1))


@dataclass(frozen=True)
class OrderedBratteliDiagram:
    diagram: BratteliDiagram
    # (level, vertex) -> incoming edges, smallest first; levels 1..last_level
    orders: Mapping[tuple[int, int], tuple[Edge, ...]]

    def __hash__(self):
        return hash((self.diagram, tuple(sorted(self.orders.items()))))

    def __eq__(self, other):
        if not isinstance(other, OrderedBratteliDiagram):
            return NotImplemented
        return self.diagram == other.diagram and dict(self.orders) == dict(other.orders)

    def order(self, level: int, vertex: int) -> tuple[Edge, ...]:
        if level < 1 or not self.diagram.has_level(level):
            raise LevelOutOfRange(f"no incoming edges at level {level}")
        stored = min(level, self.diagram.last_level)
        return self.orders[(stored, vertex)]

    def rank_of(self, level: int, vertex: int, edge: Edge) -> int:
        try:
            return self.order(level, vertex).index(edge)
        except ValueError:
            raise InvalidPath(f"{edge} is not an edge into vertex {vertex} at level {level}") from None

    def minimal_edge(self, level: int, vertex: int) -> Edge:
        return self.order(level, vertex)[0]

    def maximal_edge(self, level: int, vertex: int) -> Edge:
        return self.order(level, vertex)[-1]


def with_orders(
    diagram: BratteliDiagram, orders: Mapping[tuple[int, int], Sequence[Edge]] | None = None
) -> OrderedBratteliDiagram:
    """Attach orders to ``diagram``; vertices not listed get the lexicographic order."""
    full = {}
    given = dict(orders or {})
    for n in range(1, diagram.last_level + 1):
        for j in range(diagram.size(n)):
            default = incoming_edges(diagram, n, j)
            if (n, j) in given:
                custom = tuple((int(i), int(t)) for i, t in given.pop((n, j)))
                if sorted(custom) != list(default):
                    raise InvalidOrder(
                        f"order for vertex {j} at level {n} is not a permutation of its "
                        f"incoming edges {list(default)}",
                        matrix=n - 1,
                        row=j,
                    )
                full[(n, j)] = custom
            else:
                full[(n, j)] = default
    if given:
        raise InvalidOrder(f"orders given for unknown vertices {sorted(given)}")
    return OrderedBratteliDiagram(diagram, full)


def default_order(diagram: BratteliDiagram | OrderedBratteliDiagram) -> OrderedBratteliDiagram:
    if isinstance(diagram, OrderedBratteliDiagram):
        diagram = diagram.diagram
    return with_orders(diagram)


def non_default_orders(od: OrderedBratteliDiagram) -> dict[tuple[int, int], tuple[Edge, ...]]:
    return {
        key: order
        for key, order in sorted(od.orders.items())
        if order != incoming_edges(od.diagram, *key)
    }


@dataclass(frozen=True)
class PathWord:
    """Finite path from the root: ``vertices[m]`` is the vertex at level ``m``,
    ``copies[m-1]`` the copy index of the edge from level ``m-1`` to ``m``."""

    vertices: tuple[int, ...]
    copies: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.copies)

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple((self.vertices[m], self.copies[m]) for m in range(self.depth))

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], end: int) -> PathWord:
        edges = list(edges)
        return cls(tuple(i for i, _ in edges) + (end,), tuple(t for _, t in edges))

    def __str__(self) -> str:
        return ",".join(f"{i}.{t}" for i, t in self.edges) + f"@{self.end}"


def parse_path(text: str) -> PathWord:
    """Inverse of ``str(PathWord)``: ``"0.2,0.1,0.2@0"``; ``@end`` defaults to 0."""
    text = text.strip()
    body, _, end = text.partition("@")
    edges = []
    if body:
        for tok in body.split(","):
            i, sep, t = tok.strip().partition(".")
            if not sep:
                raise InvalidPath(f"edge token {tok!r} is not of the form source.copy")
            try:
                edges.append((int(i), int(t)))
            except ValueError:
                raise InvalidPath(f"edge token {tok!r} is not of the form source.copy") from None
    try:
        end_vertex = int(end) if end else 0
    except ValueError:
        raise InvalidPath(f"bad end vertex {end!r}") from None
    return PathWord.from_edges(edges, end_vertex)


def check_path(od: OrderedBratteliDiagram, path: PathWord) -> None:
    d = od.diagram
    if len(path.vertices) != path.depth + 1 or path.vertices[0] != 0:
        raise InvalidPath("a path starts at the root vertex 0")
    if not d.has_level(path.depth):
        raise InvalidPath(f"depth {path.depth} exceeds the diagram")
    for m in range(1, path.depth + 1):
        src, dst, t = path.vertices[m - 1], path.vertices[m], path.copies[m - 1]
        if not 0 <= dst < d.size(m):
            raise InvalidPath(f"level {m} has no vertex {dst}")
        if not 1 <= t <= d.matrix(m - 1)[dst][src]:
            raise InvalidPath(f"no edge copy {t} from vertex {src} to vertex {dst} at level {m}")


def _extreme_path_into(od: OrderedBratteliDiagram, level: int, vertex: int, maximal: bool) -> PathWord:
    vertices = [vertex]
    copies = []
    for m in range(level, 0, -1):
        i, t = od.maximal_edge(m, vertices[-1]) if maximal else od.minimal_edge(m, vertices[-1])
        copies.append(t)
        vertices.append(i)
    return PathWord(tuple(reversed(vertices)), tuple(reversed(copies)))


def min_path(od: OrderedBratteliDiagram, depth: int, end: int = 0) -> PathWord:
    """All-minimal path of length ``depth`` ending at vertex ``end``."""
    if depth < 0 or not od.diagram.has_level(depth):
        raise LevelOutOfRange(f"depth {depth} is outside the diagram")
    if not 0 <= end < od.diagram.size(depth):
        raise LevelOutOfRange(f"level {depth} has no vertex {end}")
    return _extreme_path_into(od, depth, end, maximal=False)


def max_path(od: OrderedBratteliDiagram, depth: int, end: int = 0) -> PathWord:
    """All-maximal path of length ``depth`` ending at vertex ``end``."""
    if depth < 0 or not od.diagram.has_level(depth):
        raise LevelOutOfRange(f"depth {depth} is outside the diagram")
    if not 0 <= end < od.diagram.size(depth):
        raise LevelOutOfRange(f"level {depth} has no vertex {end}")
    return _extreme_path_into(od, depth, end, maximal=True)


def successor(od: OrderedBratteliDiagram, path: PathWord) -> PathWord:
    check_path(od, path)
    n = path.depth
    for m in range(1, n + 1):
        target = path.vertices[m]
        order = od.order(m, target)
        pos = order.index((path.vertices[m - 1], path.copies[m - 1]))
        if pos + 1 < len(order):
            i, t = order[pos + 1]
            below = _extreme_path_into(od, m - 1, i, maximal=False)
            return PathWord(
                below.vertices + path.vertices[m:],
                below.copies + (t,) + path.copies[m:],
            )
    size = od.diagram.size(n)
    return _extreme_path_into(od, n, (path.end + 1) % size, maximal=False)


def orbit(od: OrderedBratteliDiagram, start: PathWord, steps: int) -> list[PathWord]:
    if steps < 0:
        raise ValueError("steps must be non-negative")
    out = [start]
    check_path(od, start)
    for _ in range(steps):
        out.append(successor(od, out[-1]))
    return out


def all_paths(diagram: BratteliDiagram, depth: int, end: int | None = None) -> list[PathWord]:
    """Every path of length ``depth`` (optionally only those ending at ``end``)."""
    paths = [PathWord((0,), ())]
    for m in range(1, depth + 1):
        mat = diagram.matrix(m - 1)
        paths = [
            PathWord(p.vertices + (j,), p.copies + (t,))
            for p in paths
            for j in range(diagram.size(m))
            for t in range(1, mat[j][p.end] + 1)
        ]
    if end is not None:
        paths = [p for p in paths if p.end == end]
    return paths


# --- proper ordering ------------------------------------------------------


@dataclass(frozen=True)
class ProperlyOrdered:
    pass


@dataclass(frozen=True)
class NotProperlyOrdered:
    """``kind`` is ``"max"`` or ``"min"``; ``cycles`` are the periodic orbits of
    the corresponding source map on tail vertices."""

    kind: str
    cycles: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class UnknownOrdering:
    reason: str = "prefix-only diagram"


def source_map(od: OrderedBratteliDiagram, maximal: bool) -> tuple[int, ...]:
    """Tail vertex -> source of its maximal (or minimal) incoming edge."""
    level = od.diagram.last_level
    pick = od.maximal_edge if maximal else od.minimal_edge
    return tuple(pick(level, v)[0] for v in range(od.diagram.size(level)))


def periodic_cycles(f: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    cycles = []
    on_cycle: set[int] = set()
    for start in range(len(f)):
        seen = []
        v = start
        while v not in seen and v not in on_cycle:
            seen.append(v)
            v = f[v]
        if v in seen:
            cyc = seen[seen.index(v):]
            k = cyc.index(min(cyc))
            cycles.append(tuple(cyc[k:] + cyc[:k]))
            on_cycle.update(cyc)
    return tuple(sorted(cycles))


def proper_ordering_check(od: OrderedBratteliDiagram):
    """Unique all-maximal and all-minimal infinite paths, decided on the tail.

    Infinite extreme paths correspond to periodic points of the source maps,
    so the ordering is proper exactly when each map has a single fixed point
    and no other periodic orbit.
    """
    if not od.diagram.stationary_tail:
        return UnknownOrdering()
    for kind, maximal in (("max", True), ("min", False)):
        cycles = periodic_cycles(source_map(od, maximal))
        if len(cycles) != 1 or len(cycles[0]) != 1:
            return NotProperlyOrdered(kind, cycles)
    return ProperlyOrdered()


# --- invariant measure ----------------------------------------------------


@dataclass(frozen=True)
class CylinderMeasure:
    """Mass of a cylinder set; ``exact`` is None when only a float is available."""

    exact: Fraction | QuadraticNumber | None
    value: float

    def __str__(self) -> str:
        if self.exact is None:
            return f"{self.value:.12g}"
        return f"{self.exact} ~ {self.value:.12g}"


def _perron_field_value(a: intmat.Matrix):
    """Exact Perron eigenvalue when it is rational or quadratic, else None."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(intmat.charpoly(a)), x)
    rho = perron_bracket(a, 1e-9)
    for factor, _ in poly.factor_list()[1]:
        coeffs = [int(c) for c in factor.all_coeffs()]
        if len(coeffs) == 2:
            root = Fraction(-coeffs[1], coeffs[0])
            if rho.low - Fraction(1, 10**6) <= root <= rho.high + Fraction(1, 10**6):
                return root
        elif len(coeffs) == 3:
            c2, c1, c0 = coeffs
            disc = c1 * c1 - 4 * c2 * c0
            if disc <= 0:
                continue
            s = QuadraticNumber.sqrt(disc)
            root = (s - c1) / (2 * c2) if c2 > 0 else (-s - c1) / (2 * c2)
            if abs(float(root) - float(rho.low)) < 1e-6:
                return root
    return None


def _null_vector(m: list[list]) -> list:
    """A nonzero kernel vector of a singular square matrix over an exact field."""
    rows = [list(r) for r in m]
    n = len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = next(c for c in range(n) if c not in pivots)
    v = [Fraction(0)] * n
    v[free] = Fraction(1)
    for i, c in enumerate(pivots):
        v[c] = -rows[i][free]
    return v


def _float_left_perron(a: intmat.Matrix, tolerance: float) -> tuple[list[float], float]:
    import numpy as np

    m = np.array(a, dtype=float).T
    vals, vecs = np.linalg.eig(m)
    k = int(np.argmax(vals.real))
    v = np.abs(vecs[:, k].real)
    lam = perron_bracket(a, tolerance).value
    return list(v), lam


def stationary_measure(od_or_diagram, path: PathWord, tolerance: float = 1e-12) -> CylinderMeasure:
    """Measure of the cylinder of ``path`` under the unique invariant probability.

    Cylinders ending at the same vertex share their mass.  In the tail the mass
    of a cylinder ending at ``v`` on level ``n`` is ``x_v / (lam^(n - t) <d_t, x>)``
    where ``x`` is the Perron eigenvector of the transposed tail matrix, ``lam``
    its eigenvalue, ``t`` the first tail level and ``d_t`` the dimension vector
    there; prefix levels are filled in by summing over one-edge extensions.
    """
    diagram = od_or_diagram.diagram if isinstance(od_or_diagram, OrderedBratteliDiagram) else od_or_diagram
    if not diagram.stationary_tail:
        raise NotPrimitive("invariant measure needs a stationary tail")
    a = diagram.tail_matrix
    if not intmat.is_primitive(a):
        raise NotPrimitive("tail matrix is not primitive; the invariant measure is not unique")
    check_path(with_orders(diagram), path)
    masses = vertex_masses(diagram, path.depth, tolerance)
    m = masses[path.end]
    if isinstance(m, float):
        return CylinderMeasure(None, m)
    return CylinderMeasure(m, float(m))


def vertex_masses(diagram: BratteliDiagram, level: int, tolerance: float = 1e-12) -> list:
    """Mass of a single cylinder ending at each vertex of ``level``."""
    a = diagram.tail_matrix
    t = diagram.tail_start
    lam = _perron_field_value(a)
    if lam is not None:
        k = len(a)
        shifted = [[Fraction(a[j][i]) - (lam if i == j else 0) for j in range(k)] for i in range(k)]
        x = _null_vector(shifted)
        if any(xi < 0 for xi in x):
            x = [-xi for xi in x]
    else:
        x, lam = _float_left_perron(a, tolerance)
    d_t = dims(diagram, t).values
    norm = sum(di * xi for di, xi in zip(d_t, x))
    if level >= t:
        scale = lam ** (level - t) * norm
        return [xi / scale for xi in x]
    # prefix levels: a cylinder's mass is the sum over its one-edge extensions
    below = vertex_masses(diagram, level + 1, tolerance)
    mat = diagram.matrix(level)
    return [
        sum(mat[j][i] * below[j] for j in range(len(mat)))
        for i in range(diagram.size(level))
    ]
