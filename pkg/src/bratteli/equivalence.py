"""Bounded search for intertwinings between Bratteli diagrams.

An intertwining of diagrams ``d1`` and ``d2`` is a zig-zag

    d1[a0] --P0--> d2[b0] --Q0--> d1[a1] --P1--> d2[b1] --Q1--> d1[a2] ...

of non-negative integer matrices with ``Q_i P_i`` equal to the composite
matrix of ``d1`` from ``a_i`` to ``a_(i+1)`` and ``P_(i+1) Q_i`` equal to the
composite of ``d2`` from ``b_i`` to ``b_(i+1)``.  The zig-zag starts at the
roots with ``P0 = [1]``; consequently every map carries dimension vectors to
dimension vectors, which bounds every entry and drives the pruning.

A witness is complete when it reaches the last stored level of both
diagrams (a stationary diagram may be passed, a plain prefix cannot), so a
prefix witness certifies the stored levels only.  Between two stationary
diagrams it must instead close up periodically inside both tails: the final
map equals an earlier map of the same kind whose levels already lie in both
tails, so the stretch in between can be repeated forever.

``Found`` is a proof of equivalence; ``NotFoundWithinBound`` is not a proof
of anything.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from sympy import factorint

from . import intmat
from .diagram import BratteliDiagram, dims
from .errors import BoundTooSmall, NotUHFShape, ShapeMismatch
from .intmat import Matrix

INFINITY = math.inf

DEFAULT_MAX_NODES = 200_000
MAX_ROW_SOLUTIONS = 512
MAX_BRANCH = 4096
# enumeration work allowed per permitted solution before a row counts as too wide
VISITS_PER_SOLUTION = 8


@dataclass(frozen=True)
class IntertwiningWitness:
    """``maps`` alternates P0, Q0, P1, Q1, ...; ``P_i`` goes from ``d1`` level
    ``a_levels[i]`` to ``d2`` level ``b_levels[i]`` and ``Q_i`` from there to
    ``d1`` level ``a_levels[i + 1]``.  For periodic witnesses the last map
    repeats ``maps[period_start]``."""

    def map_levels(self, k: int) -> tuple[int, int]:
        """(source level, target level) of ``maps[k]``."""
        i = k // 2
        if k % 2 == 0:
            return self.a_levels[i], self.b_levels[i]
        return self.b_levels[i], self.a_levels[i + 1]

    def map_name(self, k: int) -> str:
        return f"{'PQ'[k % 2]}{k // 2}"

    a_levels: tuple[int, ...]
    b_levels: tuple[int, ...]
    maps: tuple[Matrix, ...]
    period_start: int | None = None

    @property
    def p_maps(self) -> tuple[Matrix, ...]:
        return self.maps[0::2]

    @property
    def q_maps(self) -> tuple[Matrix, ...]:
        return self.maps[1::2]


@dataclass(frozen=True)
class Found:
    witness: IntertwiningWitness


@dataclass(frozen=True)
class NotFoundWithinBound:
    """``exhausted_budget``: the node budget ran out; ``truncated``: some
    candidate step admitted too many maps and was skipped."""

    bound: int
    nodes: int = 0
    exhausted_budget: bool = False
    truncated: bool = False


# --- verification ---------------------------------------------------------


def _is_complete(d1: BratteliDiagram, d2: BratteliDiagram, a: int, b: int) -> bool:
    ok1 = a == d1.last_level or (d1.stationary_tail and a > d1.last_level)
    ok2 = b == d2.last_level or (d2.stationary_tail and b > d2.last_level)
    return ok1 and ok2


def verify_intertwining(
    d1: BratteliDiagram,
    d2: BratteliDiagram,
    witness: IntertwiningWitness,
    require_complete: bool = True,
) -> bool:
    """Check every composition equation exactly.

    Raises :class:`ShapeMismatch` when the witness is not even well formed
    (wrong number of maps, or a map whose shape disagrees with its levels).
    With ``require_complete`` the witness must also reach the required levels
    or close up periodically, as described in the module docstring.
    """
    a, b, maps = witness.a_levels, witness.b_levels, witness.maps
    if not b or len(a) not in (len(b), len(b) + 1) or len(maps) != len(a) + len(b) - 1:
        raise ShapeMismatch("witness level lists and map count do not interlace")
    for n in a:
        if not d1.has_level(n):
            raise ShapeMismatch(f"first diagram has no level {n}")
    for n in b:
        if not d2.has_level(n):
            raise ShapeMismatch(f"second diagram has no level {n}")
    for i, p in enumerate(witness.p_maps):
        if intmat.shape(p) != (d2.size(b[i]), d1.size(a[i])):
            raise ShapeMismatch(f"P{i} has shape {intmat.shape(p)}")
    for i, q in enumerate(witness.q_maps):
        if intmat.shape(q) != (d1.size(a[i + 1]), d2.size(b[i])):
            raise ShapeMismatch(f"Q{i} has shape {intmat.shape(q)}")

    if a[0] != 0 or b[0] != 0 or maps[0] != ((1,),):
        return False
    if any(y < x for x, y in zip(a, a[1:])) or any(y < x for x, y in zip(b, b[1:])):
        return False
    if any(x < 0 for m in maps for row in m for x in row):
        return False
    for i, q in enumerate(witness.q_maps):
        if intmat.matmul(q, witness.p_maps[i]) != d1.segment(a[i], a[i + 1]):
            return False
        if i + 1 < len(b):
            if intmat.matmul(witness.p_maps[i + 1], q) != d2.segment(b[i], b[i + 1]):
                return False
    if not require_complete:
        return True

    if d1.stationary_tail and d2.stationary_tail:
        k = witness.period_start
        last = len(maps) - 1
        if k is None or not 0 <= k < last or (last - k) % 2 or maps[k] != maps[last]:
            return False
        src, dst = witness.map_levels(k)
        src_last, dst_last = witness.map_levels(last)
        if src_last <= src or dst_last <= dst:
            return False
        if k % 2 == 0:
            return src >= d1.tail_start and dst >= d2.tail_start
        return src >= d2.tail_start and dst >= d1.tail_start
    return _is_complete(d1, d2, a[-1], b[-1])


# --- search ---------------------------------------------------------------


def _row_solutions(
    y: Matrix, target: Sequence[int], limit: int, first_only: bool = False
) -> list[tuple[int, ...]] | None:
    """All non-negative integer ``x`` with ``x . y == target``.

    Returns ``None`` when there are more than ``limit`` solutions or the
    enumeration grows too wide to finish.  With ``first_only`` the search
    stops at the first solution.  Every row of ``y`` must contain a positive
    entry, which bounds every unknown.
    """
    k = len(y)
    m = len(target)
    # can columns c still be fed by unknowns j.. ?
    coverable = [[False] * m for _ in range(k + 1)]
    for j in range(k - 1, -1, -1):
        coverable[j] = [coverable[j + 1][c] or y[j][c] > 0 for c in range(m)]
    out: list[tuple[int, ...]] = []
    x = [0] * k
    visits = 0
    overflow = False

    def rec(j: int, res: list[int]) -> bool:
        nonlocal visits, overflow
        if j == k:
            if not any(res):
                out.append(tuple(x))
                if first_only:
                    return False
                if len(out) > limit:
                    overflow = True
                    return False
            return True
        cov = coverable[j + 1]
        # a column no later unknown can feed fixes x[j] outright
        forced = {res[c] // y[j][c] if res[c] % y[j][c] == 0 else -1
                  for c in range(m) if y[j][c] > 0 and not cov[c]}
        if len(forced) > 1 or -1 in forced:
            return True
        if forced:
            values = forced
        else:
            values = range(min(res[c] // y[j][c] for c in range(m) if y[j][c] > 0) + 1)
        for v in values:
            visits += 1
            if visits > limit * VISITS_PER_SOLUTION:
                overflow = True
                return False
            new = [r - v * yc for r, yc in zip(res, y[j])]
            if any(r < 0 or (r > 0 and not cov[c]) for c, r in enumerate(new)):
                continue
            x[j] = v
            if not rec(j + 1, new):
                return False
        x[j] = 0
        return True

    rec(0, list(target))
    if overflow and not (first_only and out):
        return None
    return out


@lru_cache(maxsize=65536)
def _solve_left(
    y: Matrix, y_dims: Sequence[int], t: Matrix, t_dims: Sequence[int], first_only: bool = False
) -> tuple[Matrix, ...] | None:
    """Non-negative integer ``X`` with ``X y = t`` and ``X y_dims = t_dims``.

    ``None`` means too many solutions to list (or, with ``first_only``, that
    the search for a single one gave up).
    """
    aug = tuple(row + (d,) for row, d in zip(y, y_dims))
    per_row = []
    for row, d in zip(t, t_dims):
        sols = _row_solutions(aug, tuple(row) + (d,), MAX_ROW_SOLUTIONS, first_only)
        if sols is None:
            return None
        if not sols:
            return ()
        per_row.append(sols)
    if math.prod(len(s) for s in per_row) > MAX_BRANCH:
        return None
    return tuple(tuple(rows) for rows in itertools.product(*per_row))


class _Search:
    def __init__(self, d1, d2, bound, max_nodes):
        self.d1, self.d2 = d1, d2
        self.bound = bound
        self.max_nodes = max_nodes
        self.nodes = 0
        self.exhausted = False
        self.truncated = False
        self.periodic = d1.stationary_tail and d2.stationary_tail
        self.horizon1 = d1.last_level + (4 * bound if d1.stationary_tail else 0)
        self.horizon2 = d2.last_level + (4 * bound if d2.stationary_tail else 0)
        self.dead: set = set()
        self.a = [0]
        self.b = [0]
        self.maps: list[Matrix] = [((1,),)]

    def witness(self, period_start=None) -> IntertwiningWitness:
        return IntertwiningWitness(tuple(self.a), tuple(self.b), tuple(self.maps), period_start)

    def _period(self) -> int | None:
        a, b, p = self.a[-1], self.b[-1], self.maps[-1]
        t1, t2 = self.d1.tail_start, self.d2.tail_start
        if a < t1 or b < t2:
            return None
        for j in range(len(self.b) - 1):
            if self.a[j] >= t1 and self.b[j] >= t2 and self.maps[2 * j] == p:
                return 2 * j
        return None

    def _candidates(self, placing_q: bool):
        """Next maps, grouped by level, ordered by branching then level.

        Composite matrices of either diagram that happen to solve the step
        come first within a level; they are what telescoping produces, and
        they survive even when the full solution set is too large to list.
        A step that completes a prefix witness needs just one solution.
        """
        d_src, d_dst = (self.d2, self.d1) if placing_q else (self.d1, self.d2)
        here = self.a[-1] if placing_q else self.b[-1]
        there = self.b[-1] if placing_q else self.a[-1]
        horizon = self.horizon1 if placing_q else self.horizon2
        last = self.maps[-1]
        y_dims = dims(d_src, there).values
        options = []
        for nxt in range(here + 1, min(here + self.bound, horizon) + 1):
            t = d_dst.segment(here, nxt)
            t_dims = dims(d_dst, nxt).values
            closing = not self.periodic and (
                _is_complete(self.d1, self.d2, nxt, there)
                if placing_q
                else _is_complete(self.d1, self.d2, there, nxt)
            )
            sols = _solve_left(last, y_dims, t, t_dims, closing)
            if sols is None:
                self.truncated = True
                sols = ()
            special = [
                m for m in self._segment_maps(d_src, there, d_dst, nxt)
                if intmat.matmul(m, last) == t
            ]
            merged = list(dict.fromkeys(special + list(sols)))
            if merged:
                options.append((len(merged), nxt, merged))
        options.sort(key=lambda o: (o[0], o[1]))
        return options

    def _segment_maps(self, d_src, src_level, d_dst, dst_level):
        """Composites of either diagram with the shape of a map src -> dst."""
        rows, cols = d_dst.size(dst_level), d_src.size(src_level)
        out = []
        for m in range(dst_level + 1):
            if d_dst.size(m) == cols:
                out.append(d_dst.segment(m, dst_level))
        reach = src_level + self.bound
        if not d_src.stationary_tail:
            reach = min(reach, d_src.last_level)
        for m in range(src_level, reach + 1):
            if d_src.size(m) == rows:
                out.append(d_src.segment(src_level, m))
        return out

    def run(self) -> IntertwiningWitness | None:
        if not self.periodic and _is_complete(self.d1, self.d2, 0, 0):
            return self.witness()
        return self._step(q_next=True)

    def _step(self, q_next: bool) -> IntertwiningWitness | None:
        key = (q_next, self.a[-1], self.b[-1], self.maps[-1])
        if not self.periodic and key in self.dead:
            return None
        for _, level, sols in self._candidates(placing_q=q_next):
            for m in sols:
                self.nodes += 1
                if self.nodes > self.max_nodes:
                    self.exhausted = True
                    return None
                (self.a if q_next else self.b).append(level)
                self.maps.append(m)
                found = self._check_done(q_next)
                if found is None:
                    found = self._step(not q_next)
                if found is not None:
                    return found
                if self.exhausted:
                    return None
                self.maps.pop()
                (self.a if q_next else self.b).pop()
        if not self.periodic:
            self.dead.add(key)
        return None

    def _check_done(self, placed_q: bool) -> IntertwiningWitness | None:
        if self.periodic:
            if not placed_q:
                j = self._period()
                if j is not None:
                    return self.witness(j)
            return None
        if _is_complete(self.d1, self.d2, self.a[-1], self.b[-1]):
            return self.witness()
        return None


def find_intertwining(
    d1: BratteliDiagram,
    d2: BratteliDiagram,
    search_bound: int,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> Found | NotFoundWithinBound:
    """Depth-first search for an intertwining witness.

    ``search_bound`` caps the level gap of every zig-zag step and, for
    stationary diagrams, how far past the stored prefix the zig-zag may reach
    (four gaps).  Entries need no separate cap: each map carries dimension
    vectors to dimension vectors, so they are bounded by ratios of
    dimensions.  Candidate levels are tried in order of how few maps they
    admit, ties by level, which keeps the result deterministic.
    """
    if isinstance(search_bound, bool) or not isinstance(search_bound, int) or search_bound < 1:
        raise BoundTooSmall(f"search bound must be a positive integer, got {search_bound!r}")
    search = _Search(d1, d2, search_bound, max_nodes)
    w = search.run()
    if w is not None:
        return Found(w)
    nodes, exhausted, truncated = search.nodes, search.exhausted, search.truncated
    if not exhausted:
        # a zig-zag that starts by stepping through d2 first
        back = _Search(d2, d1, search_bound, max_nodes - nodes)
        w = back.run()
        if w is not None:
            return Found(_swap_sides(w))
        nodes += back.nodes
        exhausted, truncated = back.exhausted, truncated or back.truncated
    return NotFoundWithinBound(search_bound, nodes, exhausted, truncated)


def _swap_sides(w: IntertwiningWitness) -> IntertwiningWitness:
    """Turn a witness for ``(d2, d1)`` into one for ``(d1, d2)``.

    The new zig-zag opens with ``[1]`` twice, stepping from level 0 of ``d1``
    to level 0 of ``d2`` and back; the old maps follow unchanged.
    """
    return IntertwiningWitness(
        (0,) + w.b_levels,
        w.a_levels,
        (((1,),),) + w.maps,
        None if w.period_start is None else w.period_start + 1,
    )


# --- supernatural numbers ---------------------------------------------------


@dataclass(frozen=True)
class SupernaturalInvariant:
    """Prime -> exponent (``INFINITY`` allowed); a ``lower_bound`` result only
    accounts for the finitely many stored factors of a plain prefix."""

    exponents: Mapping[int, float] = field(default_factory=dict)
    lower_bound: bool = False

    def exponent(self, p: int) -> float:
        return self.exponents.get(p, 0)

    def __str__(self) -> str:
        body = ", ".join(
            f"{p}:{'∞' if e == INFINITY else e}" for p, e in sorted(self.exponents.items())
        )
        return "{" + body + "}" + (" (lower bound)" if self.lower_bound else "")

    def __hash__(self):
        return hash((tuple(sorted(self.exponents.items())), self.lower_bound))


def supernatural_invariant(diagram: BratteliDiagram) -> SupernaturalInvariant:
    if any(k != 1 for k in diagram.level_sizes):
        raise NotUHFShape("supernatural numbers need one vertex at every level")
    exps: dict[int, float] = {}
    finite = diagram.matrices[:-1] if diagram.stationary_tail else diagram.matrices
    for m in finite:
        for p, e in factorint(m[0][0]).items():
            exps[p] = exps.get(p, 0) + e
    if diagram.stationary_tail:
        for p in factorint(diagram.tail_matrix[0][0]):
            exps[p] = INFINITY
    return SupernaturalInvariant(dict(sorted(exps.items())), not diagram.stationary_tail)


def supernatural_differ(s1: SupernaturalInvariant, s2: SupernaturalInvariant) -> bool:
    """Do the invariants prove the two UHF-type diagrams inequivalent?

    Two exact values must simply differ.  An exact value is also refuted by
    a lower bound that already exceeds one of its finite exponents.
    """
    if not s1.lower_bound and not s2.lower_bound:
        return dict(s1.exponents) != dict(s2.exponents)
    if s1.lower_bound and s2.lower_bound:
        return False
    exact, low = (s1, s2) if not s1.lower_bound else (s2, s1)
    return any(e > exact.exponent(p) for p, e in low.exponents.items())
