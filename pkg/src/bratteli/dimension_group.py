"""K0 of stationary diagrams: presentation and numerical invariants.

The dimension group of a stationary diagram with repeating matrix A is the
direct limit Z^k -> Z^k -> ... along A, with the dimension vector at the first
tail level as order unit.  :func:`stationary_invariants` reports exact data of
the presentation; :func:`compare_invariants` only uses the parts of it that
survive telescoping and intertwining, so a ``Distinguished`` verdict is a
proof of non-isomorphism and ``Inconclusive`` is merely the absence of one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint

from . import intmat
from .diagram import BratteliDiagram, DimensionVector, dims
from .errors import NotStationary
from .intmat import Matrix
from .spectral import perron_bracket


@dataclass(frozen=True)
class StationaryPresentation:
    rank: int
    matrix: Matrix
    unit: DimensionVector


@dataclass(frozen=True)
class InvariantReport:
    char_poly: tuple[int, ...]
    determinant: int
    eventual_rank: int
    perron: float
    perron_low: Fraction
    perron_high: Fraction
    primitive: bool
    tolerance: float
    # char_poly with the factor x^m removed; its degree is the eventual rank
    nonzero_char_poly: tuple[int, ...] = ()
    # prime p -> dimension of G/pG over F_p, for primes where it drops below the rank
    p_ranks: dict[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Distinguished:
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class Inconclusive:
    pass


def k0_presentation(diagram: BratteliDiagram) -> StationaryPresentation:
    if not diagram.stationary_tail:
        raise NotStationary("K0 presentation needs a stationary tail")
    a = diagram.tail_matrix
    return StationaryPresentation(len(a), a, dims(diagram, diagram.tail_start))


def strip_zero_roots(poly: tuple[int, ...]) -> tuple[int, ...]:
    """Drop trailing zero coefficients, i.e. divide out the largest power of x."""
    end = len(poly)
    while end > 1 and poly[end - 1] == 0:
        end -= 1
    return poly[:end]


def stationary_invariants(
    presentation: StationaryPresentation, tolerance: float = 1e-12
) -> InvariantReport:
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    a = presentation.matrix
    cp = intmat.charpoly(a)
    core = strip_zero_roots(cp)
    r = intmat.eventual_rank(a)
    p_ranks = {}
    const = abs(core[-1])
    if r and const > 1:
        for p in sorted(factorint(const)):
            d_p = intmat.eventual_rank_mod_p(a, p)
            if d_p < r:
                p_ranks[p] = d_p
    br = perron_bracket(a, tolerance)
    return InvariantReport(
        char_poly=cp,
        determinant=intmat.determinant(a),
        eventual_rank=r,
        perron=br.value,
        perron_low=br.low,
        perron_high=br.high,
        primitive=intmat.is_primitive(a),
        tolerance=tolerance,
        nonzero_char_poly=core,
        p_ranks=p_ranks,
    )


def compare_invariants(r1: InvariantReport, r2: InvariantReport) -> Distinguished | Inconclusive:
    """Look for an isomorphism invariant of the dimension groups that differs.

    Checked in order: the degree of the nonzero part of the characteristic
    polynomial (the rational rank of K0), the mod-p ranks at primes dividing
    its constant term (dimensions of K0/pK0), and primitivity (simplicity).
    Raw Perron values and full characteristic polynomials are not compared:
    telescoping replaces A by a power, changing both without changing K0.
    """
    if r1.eventual_rank != r2.eventual_rank:
        return Distinguished(
            "char_poly",
            f"nonzero spectrum has {r1.eventual_rank} vs {r2.eventual_rank} roots",
        )
    if r1.p_ranks != r2.p_ranks:
        primes = sorted(set(r1.p_ranks) | set(r2.p_ranks))
        p = next(q for q in primes if r1.p_ranks.get(q) != r2.p_ranks.get(q))
        d1 = r1.p_ranks.get(p, r1.eventual_rank)
        d2 = r2.p_ranks.get(p, r2.eventual_rank)
        return Distinguished(
            "determinant",
            f"mod-{p} rank of K0 differs ({d1} vs {d2}); prime supports of the nonzero "
            f"determinant differ",
        )
    if r1.primitive != r2.primitive:
        return Distinguished("primitive", f"primitive {r1.primitive} vs {r2.primitive}")
    return Inconclusive()


def format_poly(coeffs: tuple[int, ...], var: str = "x") -> str:
    """Render integer coefficients (leading first) as ``x^2 - x - 1``."""
    deg = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        p = deg - i
        mag = abs(c)
        if p == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else str(mag)) + (var if p == 1 else f"{var}^{p}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
