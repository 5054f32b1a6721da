import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import (
    Distinguished,
    Inconclusive,
    compare_invariants,
    k0_presentation,
    pascal,
    stationary,
    stationary_invariants,
    telescope,
    uhf,
)
from bratteli.dimension_group import format_poly, strip_zero_roots
from bratteli.errors import NotStationary
from bratteli.intmat import matpow

PHI = (1 + math.sqrt(5)) / 2


def report(tail, prefix=None):
    return stationary_invariants(k0_presentation(stationary(tail, prefix)))


def test_golden_report():
    r = report([[1, 1], [1, 0]])
    assert r.char_poly == (1, -1, -1)
    assert format_poly(r.char_poly) == "x^2 - x - 1"
    assert r.determinant == -1
    assert r.eventual_rank == 2
    assert r.primitive
    assert abs(r.perron - PHI) <= 1e-12
    assert r.perron_high - r.perron_low <= 1e-12
    assert r.p_ranks == {}


def test_presentation_unit_is_dims_at_tail_start():
    d = stationary([[2, 1], [1, 1]], [[[1], [2]]])
    p = k0_presentation(d)
    assert p.rank == 2
    assert p.matrix == ((2, 1), (1, 1))
    assert p.unit.values == (1, 2)


def test_presentation_needs_tail():
    with pytest.raises(NotStationary):
        k0_presentation(pascal(3))


def test_nilpotent_part_is_stripped():
    r = report([[1, 1, 0], [1, 1, 0], [1, 1, 1]])
    x = sympy.Symbol("x")
    expected = sympy.Matrix([[1, 1, 0], [1, 1, 0], [1, 1, 1]]).charpoly(x).all_coeffs()
    assert list(r.char_poly) == [int(c) for c in expected]
    # eigenvalues 2, 1, 0
    assert r.eventual_rank == 2
    assert r.nonzero_char_poly == (1, -3, 2)
    assert strip_zero_roots((1, -3, 2, 0)) == (1, -3, 2)
    assert strip_zero_roots((0,)) == (0,)


def test_format_poly():
    assert format_poly((1, 0, -2, 1)) == "x^3 - 2x + 1"
    assert format_poly((-1, 4)) == "-x + 4"
    assert format_poly((2,)) == "2"
    assert format_poly((0, 0)) == "0"


def test_two_vs_three_distinguished_by_determinant():
    r = compare_invariants(report([[2]]), report([[3]]))
    assert isinstance(r, Distinguished) and r.reason == "determinant"


def test_golden_vs_six_distinguished_by_rank():
    r = compare_invariants(report([[1, 1], [1, 0]]), report([[6]]))
    assert isinstance(r, Distinguished) and r.reason == "char_poly"


def test_primitive_vs_periodic():
    r = compare_invariants(report([[1, 1], [1, 0]]), report([[0, 1], [1, 1]]))
    # isomorphic matrices (transposes of each other up to relabelling)
    assert isinstance(r, Inconclusive)
    # same spectrum {1, 3} and same mod-3 rank, but the second is reducible
    r = compare_invariants(report([[2, 1], [1, 2]]), report([[3, 1], [0, 1]]))
    assert isinstance(r, Distinguished) and r.reason == "primitive"


def test_two_vs_four_inconclusive():
    # both K0 groups are Z[1/2]
    assert isinstance(compare_invariants(report([[2]]), report([[4]])), Inconclusive)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 3))
def test_telescoping_never_distinguishes(seed, power):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    a = [[rng.randint(0, 3) for _ in range(k)] for _ in range(k)]
    for row in a:
        if not any(row):
            row[0] = 1
    d = stationary(a)
    t = telescope(d, [0, 1, 1 + power])
    assert t.tail_matrix == matpow(d.tail_matrix, power)
    r = compare_invariants(
        stationary_invariants(k0_presentation(d)), stationary_invariants(k0_presentation(t))
    )
    assert isinstance(r, Inconclusive)


def test_uhf_stationary_tail_report():
    r = stationary_invariants(k0_presentation(uhf([6], stationary=True)))
    assert r.char_poly == (1, -6)
    assert r.p_ranks == {2: 0, 3: 0}
    assert r.perron == pytest.approx(6, abs=1e-12)
