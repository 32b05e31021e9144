from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hmsdesk.exactlin import (Q, ExactMatrix, Field, GradedSpace, MOD2, NotAComplex, ShapeMismatch, block,
                              determinant, homology_dim, nullspace, rank, rref, solve)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=5):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    data = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return r, c, data


def _sympy(r, c, data):
    return sympy.Matrix(r, c, [x for row in data for x in row])


@given(matrices())
def test_rank_matches_sympy(m):
    r, c, data = m
    a = ExactMatrix.from_dense(data, cols=c)
    assert rank(a) == _sympy(r, c, data).rank()


@given(matrices())
def test_rank_nullity(m):
    r, c, data = m
    a = ExactMatrix.from_dense(data, cols=c)
    ker = nullspace(a)
    assert len(ker) + rank(a) == c
    for v in ker:
        assert all(x == 0 for x in a.apply(v))


@given(matrices())
def test_rank_of_transpose(m):
    r, c, data = m
    a = ExactMatrix.from_dense(data, cols=c)
    assert rank(a) == rank(a.transpose())


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_matches_sympy(data):
    n = len(data)
    assert determinant(ExactMatrix.from_dense(data)) == Fraction(int(_sympy(n, n, data).det()))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@given(data=st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n,
                                                          max_size=n)))
def test_determinant_reduces_mod_p(p, data):
    n = len(data)
    over_q = int(_sympy(n, n, data).det())
    assert determinant(ExactMatrix.from_dense(data, Field(p))) == over_q % p


@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_returns_a_solution_when_one_exists(m, x):
    r, c, data = m
    a = ExactMatrix.from_dense(data, cols=c)
    b = a.apply(x[:c])
    sol = solve(a, b)
    assert sol is not None
    assert a.apply(sol) == b


def test_solve_inconsistent():
    a = ExactMatrix.from_dense([[1, 1], [1, 1]])
    assert solve(a, [1, 2]) is None


def test_rref_pivots():
    rows, pivots = rref(ExactMatrix.from_dense([[0, 2, 4], [0, 1, 2], [1, 0, 1]]))
    assert pivots == [0, 1]
    assert len(rows) == 2


def test_field_parsing_and_arithmetic():
    assert Field.parse("q") == Q
    assert Field.parse("fp:7").p == 7
    with pytest.raises(ValueError):
        Field.parse("fp:9")
    with pytest.raises(ValueError):
        Field.parse("reals")
    f = Field(5)
    assert f(Fraction(1, 2)) == 3
    assert f.inv(2) == 3


def test_rank_depends_on_characteristic():
    data = [[1, 1], [1, -1]]
    assert rank(ExactMatrix.from_dense(data)) == 2
    assert rank(ExactMatrix.from_dense(data, Field(2))) == 1


def test_block_shape_checked():
    with pytest.raises(ShapeMismatch):
        block([[ExactMatrix.identity(2)]], [3], [2])


def test_matmul_and_identity():
    a = ExactMatrix.from_dense([[1, 2], [3, 4]])
    assert a @ ExactMatrix.identity(2) == a
    assert (a - a).is_zero()


def test_homology_dim_checks_composite():
    d0 = ExactMatrix.from_dense([[1]])
    d1 = ExactMatrix.from_dense([[1]])
    with pytest.raises(NotAComplex):
        homology_dim(d0, d1)
    assert homology_dim(ExactMatrix.zero(1, 0), ExactMatrix.zero(0, 1)) == 1


def test_graded_space_fold_and_shift():
    g = GradedSpace("integers", {0: 1, 1: 2, 2: 3})
    assert g.fold() == GradedSpace(MOD2, {0: 4, 1: 2})
    assert g.shift(1)[-1] == 1
    assert g.euler() == 2
    assert g.fold().as_dict() == {"even": 4, "odd": 2}
