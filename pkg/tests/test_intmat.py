import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import intmat


def square(max_n=4, lo=-5, hi=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )


def test_matmul_shapes_and_values():
    a = ((1, 2), (3, 4), (5, 6))
    b = ((1, 0, 2), (0, 1, 1))
    assert intmat.matmul(a, b) == ((1, 2, 4), (3, 4, 10), (5, 6, 16))
    assert intmat.shape(a) == (3, 2)
    assert intmat.transpose(a) == ((1, 3, 5), (2, 4, 6))


def test_matpow_big_integers_stay_exact():
    fib = intmat.matpow(((1, 1), (1, 0)), 200)
    # F(201), F(200) from the closed recurrence, computed independently
    f = [0, 1]
    while len(f) < 202:
        f.append(f[-1] + f[-2])
    assert fib == ((f[201], f[200]), (f[200], f[199]))


@settings(max_examples=150, deadline=None)
@given(square())
def test_determinant_and_rank_match_sympy(rows):
    m = sympy.Matrix(rows)
    assert intmat.determinant(rows) == m.det()
    assert intmat.rank(rows) == m.rank()


@settings(max_examples=150, deadline=None)
@given(square())
def test_charpoly_matches_sympy(rows):
    x = sympy.Symbol("x")
    expected = sympy.Poly(sympy.Matrix(rows).charpoly(x).as_expr(), x).all_coeffs()
    assert list(intmat.charpoly(rows)) == [int(c) for c in expected]


def test_eventual_rank_of_nilpotent_part():
    # Jordan block for 0 of size 2 plus the scalar 3
    a = ((0, 1, 0), (0, 0, 0), (0, 0, 3))
    assert intmat.rank(a) == 2
    assert intmat.eventual_rank(a) == 1


def test_rank_mod_p():
    a = ((2, 0), (0, 3))
    assert intmat.rank_mod_p(a, 2) == 1
    assert intmat.rank_mod_p(a, 3) == 1
    assert intmat.rank_mod_p(a, 5) == 2
    assert intmat.eventual_rank_mod_p(((1, 1), (0, 0)), 2) == 1


def test_primitivity():
    assert intmat.is_primitive(((1, 1), (1, 0)))
    assert not intmat.is_primitive(((0, 1), (1, 0)))  # irreducible, period 2
    assert not intmat.is_primitive(((1, 0), (0, 1)))
    assert not intmat.is_primitive(((1, 1), (0, 1)))  # reducible
    # Wielandt's extremal matrix needs exactly (n-1)^2 + 1 = 10 steps for n = 4
    w = ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 1, 0, 0))
    assert intmat.is_primitive(w)
    assert not all(x > 0 for row in intmat.matpow(w, 9) for x in row)
    assert all(x > 0 for row in intmat.matpow(w, 10) for x in row)
