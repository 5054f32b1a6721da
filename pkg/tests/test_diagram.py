import random
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli import (
    NotSimple,
    Simple,
    UnknownAtBound,
    certificate_holds,
    dims,
    generate,
    gicar,
    odometer,
    pascal,
    simplicity,
    stationary,
    telescope,
    truncate,
    uhf,
    validate,
)
from randomdiagrams import random_diagram
from bratteli.errors import (
    BadEntry,
    BadParam,
    EmptyDiagram,
    LevelOutOfRange,
    MissingRoot,
    NonSquareTail,
    NonUnitalRoot,
    ShapeMismatch,
    UnsortedKeepList,
    ValidationError,
    ZeroRow,
)


# --- validation --------------------------------------------------------------


@pytest.mark.parametrize(
    "levels, mats, flag, error",
    [
        ([], [], False, EmptyDiagram),
        ([2], [], False, NonUnitalRoot),
        ([1, 2], [], False, ShapeMismatch),
        ([1, 2], [[[1]]], False, ShapeMismatch),
        ([1, 2], [[[1], [1, 1]]], False, ShapeMismatch),
        ([1, 2], [[[1], [0]]], False, ZeroRow),
        ([1, 2], [[[1], [-1]]], False, BadEntry),
        ([1, 2, 3], [[[1], [1]], [[1, 0], [0, 1], [1, 1]]], True, NonSquareTail),
        ([1], [], True, NonSquareTail),
        ([1, 0], [[]], False, ShapeMismatch),
    ],
)
def test_validation_errors(levels, mats, flag, error):
    with pytest.raises(error) as info:
        validate(levels, mats, flag)
    assert isinstance(info.value, ValidationError)
    assert info.value.kind == error.__name__


def test_validation_error_positions():
    with pytest.raises(ZeroRow) as info:
        validate([1, 2, 2], [[[1], [1]], [[1, 1], [0, 0]]])
    assert (info.value.matrix, info.value.row) == (1, 1)


def test_root_only_diagram():
    d = validate([1], [])
    assert d.last_level == 0
    assert dims(d, 0).values == (1,)
    with pytest.raises(LevelOutOfRange):
        dims(d, 1)


# --- dimensions ---------------------------------------------------------------


def test_pascal_dims_are_binomial_rows():
    d = pascal(12)
    for n in range(13):
        assert list(dims(d, n).values) == [comb(n, k) for k in range(n + 1)]


def test_dims_on_stationary_tail():
    golden = stationary([[1, 1], [1, 0]])
    fib = [1, 1]
    while len(fib) < 45:
        fib.append(fib[-1] + fib[-2])
    # level n >= 1 has dims (F(n+1), F(n)) with F(1) = F(2) = 1
    for n in range(1, 40):
        assert dims(golden, n).values == (fib[n], fib[n - 1])
    assert dims(odometer(3), 40).values == (3**40,)
    assert dims(uhf([2, 3], stationary=True), 5).values == (2 * 3**4,)


def test_dims_vector_is_exact_for_huge_levels():
    v = dims(odometer(10), 300).values[0]
    assert v == 10**300


def test_level_out_of_range_on_prefix():
    with pytest.raises(LevelOutOfRange):
        dims(pascal(3), 4)
    with pytest.raises(LevelOutOfRange):
        dims(pascal(3), -1)


def test_matrix_access_in_tail():
    golden = stationary([[1, 1], [1, 0]])
    assert golden.tail_start == 1
    assert golden.matrix(57) == ((1, 1), (1, 0))
    assert golden.size(1000) == 2


# --- telescoping --------------------------------------------------------------


def test_telescope_pascal_example():
    t = telescope(gicar(4), [0, 2, 4])
    assert t.level_sizes == (1, 3, 5)
    assert t.matrices[0] == ((1,), (2,), (1,))
    assert dims(t, 2).values == (1, 4, 6, 4, 1)


def test_telescope_stationary_tail_becomes_power():
    golden = stationary([[1, 1], [1, 0]])
    t = telescope(golden, [0, 1, 3])
    assert t.stationary_tail
    assert t.tail_matrix == ((2, 1), (1, 1))
    for m in range(1, 8):
        assert dims(t, m + 1).values == dims(golden, 1 + 2 * m).values


def test_telescope_errors():
    d = pascal(4)
    with pytest.raises(MissingRoot):
        telescope(d, [1, 2])
    with pytest.raises(UnsortedKeepList):
        telescope(d, [0, 3, 2])
    with pytest.raises(UnsortedKeepList):
        telescope(d, [0, 2, 2])
    with pytest.raises(LevelOutOfRange):
        telescope(d, [0, 5])


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_telescope_preserves_kept_dims(seed):
    rng = random.Random(seed)
    d = random_diagram(rng)
    top = d.last_level + (3 if d.stationary_tail else 0)
    keep = [0] + sorted(rng.sample(range(1, top + 1), rng.randint(0, top))) if top else [0]
    t = telescope(d, keep)
    for m, n in enumerate(keep):
        assert dims(t, m).values == dims(d, n).values


def test_truncate_unrolls_tail():
    d = truncate(odometer(2), 5)
    assert not d.stationary_tail
    assert d.level_sizes == (1,) * 6
    assert dims(d, 5).values == (32,)


# --- generators ----------------------------------------------------------------


def test_generators_reject_bad_params():
    with pytest.raises(BadParam):
        pascal(0)
    with pytest.raises(BadParam):
        uhf([])
    with pytest.raises(BadParam):
        uhf([1, 2])
    with pytest.raises(BadParam):
        odometer(1)
    with pytest.raises(BadParam):
        generate("nonsense", 3)
    with pytest.raises(BadParam):
        stationary([[1, 1], [1, 1]], [[[1], [1], [1]]])


def test_generate_dispatch():
    assert generate("gicar", 3) == pascal(3)
    assert generate("uhf", [2, 2], stationary=True) == uhf([2, 2], stationary=True)
    assert generate("dynkin_tower", "A", 3, 4).level_sizes == (1, 1, 2, 1, 2)


# --- simplicity ---------------------------------------------------------------


def reaches_everything(diagram, level, vertex, horizon):
    """Independent oracle: does one vertex eventually feed a whole level?"""
    v = np.zeros(diagram.size(level), dtype=bool)
    v[vertex] = True
    for n in range(level, horizon):
        m = np.array(diagram.matrix(n)) > 0
        v = (m.astype(int) @ v.astype(int)) > 0
        if v.all():
            return True
    return False


def test_simplicity_examples():
    assert simplicity(stationary([[1, 1], [1, 0]]), 10) == Simple()
    assert simplicity(odometer(2), 10) == Simple()
    assert simplicity(stationary([[1, 0], [0, 1]]), 10) == NotSimple(1, frozenset({0}))
    assert simplicity(gicar(20), 20) == UnknownAtBound(20)
    assert simplicity(gicar(20), 5) == UnknownAtBound(5)


def test_periodic_tail_is_not_simple():
    verdict = simplicity(stationary([[0, 1], [1, 0]]), 10)
    assert isinstance(verdict, NotSimple)
    assert certificate_holds(stationary([[0, 1], [1, 0]]), verdict)


def test_dying_vertex_in_prefix():
    # vertex 1 of level 1 sends no edge to level 2
    d = validate([1, 2, 1], [[[1], [1]], [[1, 0]]])
    verdict = simplicity(d, 5)
    assert verdict == NotSimple(1, frozenset({1}))
    assert certificate_holds(d, verdict)


def test_certificate_rejects_false_claims():
    golden = stationary([[1, 1], [1, 0]])
    assert not certificate_holds(golden, NotSimple(1, frozenset({0})))
    assert not certificate_holds(golden, NotSimple(1, frozenset({0, 1})))
    assert not certificate_holds(golden, NotSimple(1, frozenset()))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_simplicity_agrees_with_oracle_on_stationary(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 4)
    tail = [[rng.choice([0, 0, 1, 2]) for _ in range(k)] for _ in range(k)]
    for j in range(k):
        if not any(tail[j]):
            tail[j][rng.randrange(k)] = 1
    d = stationary(tail)
    verdict = simplicity(d, 10)
    horizon = d.tail_start + 2 * k * k + 2
    oracle = all(
        reaches_everything(d, n, v, horizon + n)
        for n in range(d.tail_start + 1)
        for v in range(d.size(n))
    )
    assert isinstance(verdict, Simple) == oracle
    if isinstance(verdict, NotSimple):
        assert certificate_holds(d, verdict)
        assert not reaches_everything(d, verdict.level, min(verdict.vertices), horizon + verdict.level)
