"""Exact integer matrix arithmetic on tuples of Python ints.

Matrices are row-major tuples of tuples so they can be hashed, compared and
shared freely.  Nothing here ever converts to floating point.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if shape(a)[1] != len(b):
        raise ValueError(f"cannot multiply {shape(a)} by {shape(b)}")
    cols = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Matrix, v: Sequence[int]) -> Vector:
    if shape(a)[1] != len(v):
        raise ValueError(f"cannot apply {shape(a)} matrix to length-{len(v)} vector")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def matpow(a: Matrix, e: int) -> Matrix:
    if e < 0:
        raise ValueError("negative exponent")
    result = identity(len(a))
    base = a
    while e:
        if e & 1:
            result = matmul(result, base)
        e >>= 1
        if e:
            base = matmul(base, base)
    return result


def product(mats: Sequence[Matrix], size: int) -> Matrix:
    """Compose ``mats`` in application order: ``mats[-1] @ ... @ mats[0]``.

    ``size`` is the dimension of the identity returned for an empty sequence.
    """
    result = identity(size)
    for m in mats:
        result = matmul(m, result)
    return result


def add_identity(a: Matrix, c: int = 1) -> Matrix:
    return tuple(tuple(x + (c if i == j else 0) for j, x in enumerate(row)) for i, row in enumerate(a))


def _bareiss(rows: list[list[int]]) -> tuple[int, int]:
    """Fraction-free elimination in place; returns ``(rank, sign * last pivot)``.

    For a square full-rank input the second value is the determinant.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    prev = 1
    sign = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, n_rows):
            ric = rows[i][c]
            row_i = rows[i]
            row_r = rows[r]
            for j in range(c + 1, n_cols):
                # exact by Sylvester's identity
                row_i[j] = (p * row_i[j] - ric * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r, sign * prev


def rank(a: Matrix) -> int:
    """Rank over the rationals."""
    if not a or not a[0]:
        return 0
    r, _ = _bareiss([list(row) for row in a])
    return r


def determinant(a: Matrix) -> int:
    n, m = shape(a)
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    r, det = _bareiss([list(row) for row in a])
    return det if r == n else 0


def charpoly(a: Matrix) -> tuple[int, ...]:
    """Coefficients of det(xI - A), leading coefficient first.

    Faddeev-LeVerrier recurrence; every division is exact over the integers.
    """
    n, m = shape(a)
    if n != m:
        raise ValueError("characteristic polynomial of a non-square matrix")
    coeffs = [1]
    acc = tuple((0,) * n for _ in range(n))
    for k in range(1, n + 1):
        acc = add_identity(acc, coeffs[-1])
        am = matmul(a, acc)
        trace = sum(am[i][i] for i in range(n))
        q, rem = divmod(-trace, k)
        assert rem == 0
        coeffs.append(q)
        acc = am
    return tuple(coeffs)


def eventual_rank(a: Matrix) -> int:
    """Rank of A^k, which is where the rank sequence of powers stabilises."""
    return rank(matpow(a, len(a)))


def rank_mod_p(a: Matrix, p: int) -> int:
    rows = [[x % p for x in row] for row in a]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == n_rows:
            break
    return r


def eventual_rank_mod_p(a: Matrix, p: int) -> int:
    reduced = tuple(tuple(x % p for x in row) for row in a)
    power = identity(len(a))
    for _ in range(len(a)):
        power = tuple(tuple(x % p for x in row) for row in matmul(reduced, power))
    return rank_mod_p(power, p)


def support(a: Matrix) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(x != 0 for x in row) for row in a)


def _bool_matmul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(any(x and y for x, y in zip(row, col)) for col in cols) for row in a)


def is_primitive(a: Matrix) -> bool:
    """Some power of the non-negative square matrix ``a`` is strictly positive.

    Decided exactly by squaring the zero pattern past Wielandt's bound
    (k-1)^2 + 1: a primitive matrix has every higher power positive too.
    """
    n = len(a)
    if n == 0:
        return False
    bound = (n - 1) ** 2 + 1
    pattern = support(a)
    power = pattern
    e = 1
    while e < bound:
        power = _bool_matmul(power, power)
        e *= 2
    return all(all(row) for row in power)
