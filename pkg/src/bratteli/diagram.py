"""Bratteli diagrams: validated construction, dimensions, telescoping, generators.

A diagram is stored as a finite prefix of levels plus an optional stationary
tail.  Level 0 is always the single root vertex of dimension 1.  Matrix ``n``
has one row per vertex of level ``n + 1`` and one column per vertex of level
``n``; entry ``[j][i]`` counts the edges from vertex ``i`` down to vertex
``j``, so dimension vectors propagate by left multiplication.  When
``stationary_tail`` is set the last matrix repeats forever, i.e. level ``n``
for every ``n >= len(level_sizes) - 2`` is followed by the same matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    BadEntry,
    BadParam,
    EmptyDiagram,
    LevelOutOfRange,
    MissingRoot,
    NonSquareTail,
    NonUnitalRoot,
    ShapeMismatch,
    UnsortedKeepList,
    ZeroRow,
)
from .intmat import Matrix


@dataclass(frozen=True)
class DimensionVector:
    level: int
    values: tuple[int, ...]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class BratteliDiagram:
    level_sizes: tuple[int, ...]
    matrices: tuple[Matrix, ...]
    stationary_tail: bool = False

    @property
    def num_levels(self) -> int:
        """Number of levels stored in the prefix."""
        return len(self.level_sizes)

    @property
    def last_level(self) -> int:
        return len(self.level_sizes) - 1

    @property
    def tail_start(self) -> int | None:
        """First level from which the repeating matrix applies."""
        return len(self.level_sizes) - 2 if self.stationary_tail else None

    @property
    def tail_matrix(self) -> Matrix | None:
        return self.matrices[-1] if self.stationary_tail else None

    def has_level(self, n: int) -> bool:
        return n >= 0 and (self.stationary_tail or n < len(self.level_sizes))

    def _check_level(self, n: int) -> None:
        if not self.has_level(n):
            raise LevelOutOfRange(
                f"level {n} is beyond the {len(self.level_sizes)}-level prefix "
                "and the diagram has no stationary tail"
            )

    def size(self, n: int) -> int:
        self._check_level(n)
        return self.level_sizes[min(n, len(self.level_sizes) - 1)]

    def matrix(self, n: int) -> Matrix:
        """Multiplicity matrix from level ``n`` to level ``n + 1``."""
        self._check_level(n + 1)
        return self.matrices[min(n, len(self.matrices) - 1)]

    def segment(self, start: int, stop: int) -> Matrix:
        """Composite multiplicity matrix from level ``start`` to level ``stop``."""
        if stop < start:
            raise ValueError("segment end precedes start")
        self._check_level(stop)
        return _segment(self, start, stop)

    def dims(self, n: int) -> DimensionVector:
        return dims(self, n)


@lru_cache(maxsize=4096)
def _segment(d: BratteliDiagram, start: int, stop: int) -> Matrix:
    result = intmat.identity(d.size(start))
    tail = d.tail_start
    for level in range(start, stop):
        if tail is not None and level >= tail:
            return intmat.matmul(intmat.matpow(d.tail_matrix, stop - level), result)
        result = intmat.matmul(d.matrix(level), result)
    return result


def validate(
    raw_levels: Sequence[int],
    raw_matrices: Sequence[Sequence[Sequence[int]]],
    stationary_flag: bool = False,
) -> BratteliDiagram:
    """Build a :class:`BratteliDiagram` from raw data, checking every invariant."""
    if not raw_levels:
        raise EmptyDiagram("a diagram needs at least the root level")
    sizes = []
    for n, k in enumerate(raw_levels):
        if isinstance(k, bool) or not isinstance(k, int) or k < 1:
            raise ShapeMismatch(f"level {n} size must be a positive integer, got {k!r}")
        sizes.append(k)
    if sizes[0] != 1:
        raise NonUnitalRoot(f"level 0 must be a single root vertex, got {sizes[0]} vertices")
    if len(raw_matrices) != len(sizes) - 1:
        raise ShapeMismatch(
            f"{len(sizes)} levels need {len(sizes) - 1} matrices, got {len(raw_matrices)}"
        )
    mats = []
    for n, raw in enumerate(raw_matrices):
        rows = list(raw)
        if len(rows) != sizes[n + 1]:
            raise ShapeMismatch(
                f"matrix {n} has {len(rows)} rows, level {n + 1} has {sizes[n + 1]} vertices",
                matrix=n,
            )
        m = []
        for j, row in enumerate(rows):
            row = list(row)
            if len(row) != sizes[n]:
                raise ShapeMismatch(
                    f"matrix {n} row {j} has {len(row)} entries, level {n} has {sizes[n]} vertices",
                    matrix=n,
                    row=j,
                )
            for x in row:
                if isinstance(x, bool) or not isinstance(x, int) or x < 0:
                    raise BadEntry(
                        f"matrix {n} row {j}: entries must be non-negative integers, got {x!r}",
                        matrix=n,
                        row=j,
                    )
            if not any(row):
                raise ZeroRow(
                    f"vertex {j} of level {n + 1} receives no edge from level {n}",
                    matrix=n,
                    row=j,
                )
            m.append(tuple(row))
        mats.append(tuple(m))
    if stationary_flag:
        if not mats:
            raise NonSquareTail("a stationary tail needs at least one matrix")
        if sizes[-1] != sizes[-2]:
            raise NonSquareTail(
                f"tail matrix is {sizes[-1]}x{sizes[-2]}; a repeating matrix must be square",
                matrix=len(mats) - 1,
            )
    return BratteliDiagram(tuple(sizes), tuple(mats), bool(stationary_flag))


def dims(diagram: BratteliDiagram, n: int) -> DimensionVector:
    """Exact dimension vector at level ``n`` (root has dimension 1)."""
    if n < 0:
        raise LevelOutOfRange(f"negative level {n}")
    diagram._check_level(n)
    return DimensionVector(n, _dims(diagram, n))


@lru_cache(maxsize=4096)
def _dims(d: BratteliDiagram, n: int) -> tuple[int, ...]:
    v: tuple[int, ...] = (1,)
    for level in range(n):
        v = intmat.matvec(d.matrix(level), v)
    return v


def truncate(diagram: BratteliDiagram, depth: int) -> BratteliDiagram:
    """The plain prefix holding levels ``0..depth`` (unrolling any tail)."""
    if depth < 0:
        raise LevelOutOfRange("negative depth")
    diagram._check_level(depth)
    sizes = tuple(diagram.size(n) for n in range(depth + 1))
    mats = tuple(diagram.matrix(n) for n in range(depth))
    return BratteliDiagram(sizes, mats, False)


def telescope(diagram: BratteliDiagram, kept_levels: Iterable[int]) -> BratteliDiagram:
    """Keep only ``kept_levels``, composing the matrices in between.

    For a stationary diagram whose last two kept levels both lie in the tail,
    the result is stationary again: the final gap ``g`` is taken to repeat, so
    the new tail matrix is the ``g``-th power of the old one.
    """
    keep = list(kept_levels)
    if not keep or keep[0] != 0:
        raise MissingRoot("kept levels must start with the root level 0")
    for a, b in zip(keep, keep[1:]):
        if b <= a:
            raise UnsortedKeepList(f"kept levels must be strictly increasing: {a} then {b}")
    for n in keep:
        diagram._check_level(n)
    sizes = tuple(diagram.size(n) for n in keep)
    mats = tuple(diagram.segment(a, b) for a, b in zip(keep, keep[1:]))
    tail = diagram.tail_start
    stationary = tail is not None and len(keep) >= 2 and keep[-2] >= tail
    return BratteliDiagram(sizes, mats, stationary)


# --- generators ------------------------------------------------------------


def _require_int(name: str, value, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise BadParam(f"{name} must be an integer >= {minimum}, got {value!r}")
    return value


def pascal(depth: int) -> BratteliDiagram:
    """Pascal's triangle to ``depth``: level n has n + 1 vertices, all multiplicities 1."""
    _require_int("depth", depth, 1)
    mats = []
    for n in range(depth):
        mats.append(
            tuple(
                tuple(1 if i in (j - 1, j) else 0 for i in range(n + 1))
                for j in range(n + 2)
            )
        )
    return BratteliDiagram(tuple(range(1, depth + 2)), tuple(mats), False)


def gicar(depth: int) -> BratteliDiagram:
    """Diagram of the gauge-invariant CAR algebra; identical to :func:`pascal`."""
    return pascal(depth)


def uhf(factors: Sequence[int], stationary: bool = False) -> BratteliDiagram:
    """UHF-type diagram with one vertex per level and matrices ``[f]``.

    With ``stationary`` the last factor repeats forever.
    """
    factors = list(factors)
    if not factors:
        raise BadParam("uhf needs at least one factor")
    for f in factors:
        _require_int("factor", f, 2)
    return BratteliDiagram(
        (1,) * (len(factors) + 1),
        tuple(((f,),) for f in factors),
        stationary,
    )


def odometer(base: int) -> BratteliDiagram:
    """Stationary one-vertex diagram with ``base`` parallel edges per level."""
    _require_int("base", base, 2)
    return uhf([base], stationary=True)


def stationary(
    repeating: Sequence[Sequence[int]],
    prefix: Sequence[Sequence[Sequence[int]]] | None = None,
) -> BratteliDiagram:
    """Diagram whose ``repeating`` square matrix applies from the last prefix level on.

    ``prefix`` lists the matrices leading from the root to the first tail
    level; by default the root feeds every tail vertex once.
    """
    tail = intmat.as_matrix(repeating)
    k = len(tail)
    if k == 0:
        raise BadParam("repeating matrix is empty")
    if prefix is None:
        prefix = [[[1]] * k]
    prefix = [intmat.as_matrix(m) for m in prefix]
    sizes = [1] + [len(m) for m in prefix]
    if sizes[-1] != k:
        raise BadParam(f"prefix ends with {sizes[-1]} vertices, repeating matrix is {k}x{k}")
    sizes.append(k)
    return validate(sizes, prefix + [tail], True)


def generate(kind: str, *params, **options) -> BratteliDiagram:
    """Dispatch to a named generator (``dynkin_tower`` lives in :mod:`towers`)."""
    kind = kind.lower()
    if kind == "pascal":
        return pascal(*params, **options)
    if kind == "gicar":
        return gicar(*params, **options)
    if kind == "uhf":
        return uhf(*params, **options)
    if kind == "odometer":
        return odometer(*params, **options)
    if kind == "stationary":
        return stationary(*params, **options)
    if kind in ("dynkin_tower", "dynkin", "tower"):
        from .towers import dynkin, tower_diagram

        type_, rank, depth = params
        return tower_diagram(dynkin(type_, rank, **options), depth)
    raise BadParam(f"unknown generator kind {kind!r}")


# --- simplicity -------------------------------------------------------------


@dataclass(frozen=True)
class Simple:
    pass


@dataclass(frozen=True)
class NotSimple:
    """``vertices`` at ``level`` never spread over a whole later level."""

    level: int
    vertices: frozenset[int]


@dataclass(frozen=True)
class UnknownAtBound:
    depth: int


SimplicityVerdict = Simple | NotSimple | UnknownAtBound


def forward(diagram: BratteliDiagram, level: int, vertices: Iterable[int]) -> frozenset[int]:
    """Vertices of ``level + 1`` receiving an edge from ``vertices``."""
    m = diagram.matrix(level)
    src = set(vertices)
    return frozenset(j for j, row in enumerate(m) if any(row[i] for i in src))


def _never_covers_in_tail(tail: Matrix, start: frozenset[int]) -> bool:
    """Does iterating ``start`` under the tail pattern avoid the full vertex set forever?"""
    k = len(tail)
    seen = set()
    current = start
    while current not in seen:
        if len(current) == k:
            return False
        seen.add(current)
        current = frozenset(j for j, row in enumerate(tail) if any(row[i] for i in current))
    return True


def simplicity(diagram: BratteliDiagram, depth_bound: int) -> SimplicityVerdict:
    """Three-valued simplicity test.

    A stationary diagram is decided exactly: its tail must be primitive and
    every prefix vertex must reach the tail.  For a plain prefix only a
    vertex whose edges die out inside the prefix (within ``depth_bound``
    levels) yields a definite answer.
    """
    if depth_bound < 1:
        raise BadParam("depth_bound must be at least 1")
    last = diagram.last_level
    tail = diagram.tail_start
    horizon = last if tail is not None else min(last, depth_bound)
    # a vertex whose forward closure empties out inside the prefix
    for n in range(0, horizon):
        for v in range(diagram.size(n)):
            reach = frozenset([v])
            for m in range(n, horizon):
                reach = forward(diagram, m, reach)
                if not reach:
                    return NotSimple(n, frozenset([v]))
    if tail is None:
        return UnknownAtBound(horizon)
    a = diagram.tail_matrix
    if intmat.is_primitive(a):
        return Simple()
    for v in range(len(a)):
        if _never_covers_in_tail(a, frozenset([v])):
            return NotSimple(tail, frozenset([v]))
    raise AssertionError("non-primitive tail without a certificate")  # pragma: no cover


def certificate_holds(diagram: BratteliDiagram, verdict: NotSimple) -> bool:
    """Check a :class:`NotSimple` certificate by forward propagation.

    Stationary diagrams are followed until the vertex-set sequence repeats, so
    a ``True`` answer is a proof; plain prefixes are followed to their last level.
    """
    n = verdict.level
    current = verdict.vertices
    if not current or not diagram.has_level(n):
        return False
    if len(current) >= diagram.size(n) or max(current) >= diagram.size(n) or min(current) < 0:
        return False
    tail = diagram.tail_start
    seen: set[frozenset[int]] = set()
    level = n
    while True:
        if len(current) == diagram.size(level):
            return False
        if tail is not None and level >= tail:
            if current in seen:
                return True
            seen.add(current)
        elif tail is None and level == diagram.last_level:
            return True
        current = forward(diagram, level, current)
        level += 1
        if not current:
            return True
