"""Perron eigenvalue of non-negative integer matrices by bracketed power iteration.

Iterates on exact integer vectors and tracks the Collatz-Wielandt bracket

    min_i (Bv)_i / v_i  <=  rho(B)  <=  max_i (Bv)_i / v_i,

valid for any non-negative B and strictly positive v.  Irreducible blocks are
shifted by the identity first: B + I is primitive, so the bracket closes, and
its spectral radius is rho(B) + 1.  Reducible matrices are split into strongly
connected components and the largest block radius is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .intmat import Matrix, add_identity, matvec

MAX_ITERATIONS = 100_000


@dataclass(frozen=True)
class PerronBracket:
    low: Fraction
    high: Fraction
    converged: bool = True

    @property
    def value(self) -> float:
        return float((self.low + self.high) / 2)

    @property
    def width(self) -> Fraction:
        return self.high - self.low


def _components(a: Matrix) -> list[list[int]]:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(a)))
    g.add_edges_from((i, j) for i, row in enumerate(a) for j, x in enumerate(row) if x)
    return sorted(sorted(c) for c in nx.strongly_connected_components(g))


def _irreducible_bracket(a: Matrix, tolerance: Fraction) -> PerronBracket:
    n = len(a)
    if n == 1:
        x = Fraction(a[0][0])
        return PerronBracket(x, x)
    shifted = add_identity(a)
    v = (1,) * n
    low = high = Fraction(0)
    for _ in range(MAX_ITERATIONS):
        w = matvec(shifted, v)
        low = min(Fraction(x, y) for x, y in zip(w, v)) - 1
        high = max(Fraction(x, y) for x, y in zip(w, v)) - 1
        if high - low < tolerance:
            return PerronBracket(low, high)
        g = math.gcd(*w)
        v = tuple(x // g for x in w)
    return PerronBracket(low, high, converged=False)


def perron_bracket(a: Matrix, tolerance: float | Fraction = 1e-12) -> PerronBracket:
    """Bracket of width below ``tolerance`` around the spectral radius of ``a``."""
    if not a:
        raise ValueError("empty matrix")
    tol = Fraction(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    brackets = []
    for comp in _components(a):
        block = tuple(tuple(a[i][j] for j in comp) for i in comp)
        if len(comp) == 1 and block[0][0] == 0:
            brackets.append(PerronBracket(Fraction(0), Fraction(0)))
        else:
            brackets.append(_irreducible_bracket(block, tol))
    # rho is the largest block radius, so it lies between the largest bounds
    return PerronBracket(
        max(b.low for b in brackets),
        max(b.high for b in brackets),
        all(b.converged for b in brackets),
    )
