"""Period-two tower diagrams from simply-laced Coxeter-Dynkin graphs.

Vertex numbering:

* ``A_n``: the path ``0 - 1 - ... - (n-1)``.
* ``D_n``: the path ``0 - 1 - ... - (n-2)`` with vertex ``n-1`` also joined
  to ``n-3``, so the fork leaves are ``n-2`` and ``n-1``.
* ``E_n``: the path ``0 - 1 - ... - (n-2)`` with vertex ``n-1`` joined to
  vertex 2, giving arms of 2, ``n-4`` and 1 edges around the branch point.

The default start vertex is 0, which has degree one in every family.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .diagram import BratteliDiagram
from .errors import BadDepth, BadParam, BadRank, Disconnected
from .intmat import Matrix
from .spectral import perron_bracket


@dataclass(frozen=True)
class MarkedGraph:
    adjacency: Matrix
    colors: tuple[int, ...]
    start: int = 0
    name: str = ""

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    @property
    def classes(self) -> tuple[frozenset[int], frozenset[int]]:
        return (
            frozenset(v for v, c in enumerate(self.colors) if c == 0),
            frozenset(v for v, c in enumerate(self.colors) if c == 1),
        )

    def neighbors(self, v: int) -> list[int]:
        return [u for u, m in enumerate(self.adjacency[v]) if m]


def _two_coloring(adj: Matrix, start: int) -> tuple[int, ...]:
    n = len(adj)
    colors = [-1] * n
    colors[start] = 0
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for u in range(n):
            if adj[v][u]:
                if colors[u] == -1:
                    colors[u] = 1 - colors[v]
                    queue.append(u)
                elif colors[u] == colors[v]:
                    raise BadParam("graph is not bipartite")
    if -1 in colors:
        raise Disconnected("graph is not connected")
    return tuple(colors)


def marked_graph(adjacency, start: int = 0, name: str = "") -> MarkedGraph:
    adj = tuple(tuple(int(x) for x in row) for row in adjacency)
    n = len(adj)
    if n == 0 or any(len(row) != n for row in adj):
        raise BadParam("adjacency must be a non-empty square matrix")
    if any(adj[i][j] != adj[j][i] or adj[i][j] < 0 for i in range(n) for j in range(n)):
        raise BadParam("adjacency must be symmetric and non-negative")
    if not 0 <= start < n:
        raise BadParam(f"start vertex {start} out of range")
    return MarkedGraph(adj, _two_coloring(adj, start), start, name)


def _from_edges(n: int, edges, start: int, name: str) -> MarkedGraph:
    adj = [[0] * n for _ in range(n)]
    for a, b in edges:
        adj[a][b] = adj[b][a] = 1
    return marked_graph(adj, start, name)


def dynkin(type_: str, rank: int, start: int = 0) -> MarkedGraph:
    t = str(type_).upper()
    if isinstance(rank, bool) or not isinstance(rank, int):
        raise BadRank(f"rank must be an integer, got {rank!r}")
    path = [(i, i + 1) for i in range(rank - 2)]
    if t == "A":
        if rank < 2:
            raise BadRank("A_n needs n >= 2")
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif t == "D":
        if rank < 4:
            raise BadRank("D_n needs n >= 4")
        edges = path + [(rank - 3, rank - 1)]
    elif t == "E":
        if rank not in (6, 7, 8):
            raise BadRank("E_n needs n in {6, 7, 8}")
        edges = path + [(2, rank - 1)]
    else:
        raise BadRank(f"unknown Dynkin type {type_!r}")
    if not 0 <= start < rank:
        raise BadParam(f"start vertex {start} out of range")
    return _from_edges(rank, edges, start, f"{t}{rank}")


def tower_diagram(graph: MarkedGraph, depth: int) -> BratteliDiagram:
    """Bratteli diagram of the tower anchored at ``graph.start``.

    Level ``n + 1`` holds the neighbours of level ``n``; the matrices are the
    blocks of the adjacency between the two colour classes, transposed on
    alternate steps, so the diagram repeats with period two once every vertex
    has been reached.
    """
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 1:
        raise BadDepth(f"depth must be a positive integer, got {depth!r}")
    adj = graph.adjacency
    levels = [[graph.start]]
    mats = []
    for _ in range(depth):
        prev = levels[-1]
        nxt = sorted({u for v in prev for u in graph.neighbors(v)})
        if not nxt:
            raise BadParam("start vertex is isolated")
        mats.append(tuple(tuple(adj[j][i] for i in prev) for j in nxt))
        levels.append(nxt)
    return BratteliDiagram(tuple(len(lv) for lv in levels), tuple(mats), False)


def tower_levels(graph: MarkedGraph, depth: int) -> list[list[int]]:
    """Graph vertices sitting at each level of :func:`tower_diagram`."""
    levels = [[graph.start]]
    for _ in range(depth):
        levels.append(sorted({u for v in levels[-1] for u in graph.neighbors(v)}))
    return levels


def graph_norm(graph: MarkedGraph, tolerance: float = 1e-12) -> float:
    """Largest adjacency eigenvalue, bracketed to within ``tolerance``."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    _two_coloring(graph.adjacency, graph.start)
    return perron_bracket(graph.adjacency, tolerance).value


def jones_index(graph: MarkedGraph, tolerance: float = 1e-12) -> float:
    return graph_norm(graph, tolerance) ** 2
