import pytest
from hypothesis import given, strategies as st

from hmsdesk.complexes import (ChainMap, Complex, GradingMismatch, HomComplex, are_quasi_isomorphic, class_rank,
                               cohomology, cohomology_representatives, cone, direct_sum, find_quasi_iso, fold,
                               hom_cohomology, is_acyclic, is_quasi_iso, point, shift, unfurl, zero_complex)
from hmsdesk.exactlin import ExactMatrix, GradedSpace, INTEGERS, MOD2, NotAComplex


@st.composite
def complexes(draw, lo=-1, hi=2, max_dim=3):
    """Random complexes built as sums of points and two-term acyclic pieces, then conjugated."""
    pieces = []
    for _ in range(draw(st.integers(1, 3))):
        k = draw(st.integers(lo, hi))
        if draw(st.booleans()):
            pieces.append(point(degree=k))
        else:
            one = ExactMatrix.from_dense([[draw(st.sampled_from([1, 2, -3]))]])
            pieces.append(Complex({k: 1, k + 1: 1}, {k: one}))
    return direct_sum(*pieces)


def _brute_hom_dims(x, y):
    """Over a field, Hom^n(x, y) has cohomology sum_i Hom(H^i x, H^{i+n} y)."""
    hx, hy = cohomology(x), cohomology(y)
    out = {}
    for i, a in hx.dims.items():
        for j, b in hy.dims.items():
            out[j - i] = out.get(j - i, 0) + a * b
    return {k: v for k, v in out.items() if v}


def test_point_and_zero():
    assert cohomology(point(degree=3)).dims == {3: 1}
    assert is_acyclic(zero_complex())


def test_d_squared_checked():
    one = ExactMatrix.from_dense([[1]])
    with pytest.raises(NotAComplex):
        Complex({0: 1, 1: 1, 2: 1}, {0: one, 1: one})


def test_shift_convention():
    one = ExactMatrix.from_dense([[2]])
    c = Complex({0: 1, 1: 1}, {0: one})
    s = shift(c, 1)
    assert s.terms == {-1: 1, 0: 1}
    assert s.d(-1).entries[(0, 0)] == -2
    assert shift(c, 2).d(-2) == one


def test_cone_convention():
    x, y = point(), point()
    f = ChainMap(x, y, {0: ExactMatrix.from_dense([[1]])})
    c = cone(f)
    assert c.terms == {-1: 1, 0: 1}
    assert is_acyclic(c)
    zero = ChainMap.zero(x, y)
    assert cohomology(cone(zero)).dims == {-1: 1, 0: 1}


@given(complexes(), st.integers(-3, 3))
def test_shift_moves_cohomology(c, n):
    assert cohomology(shift(c, n)) == cohomology(c).shift(n)


@given(complexes(), complexes())
def test_hom_cohomology_matches_field_formula(x, y):
    assert hom_cohomology(x, y).dims == _brute_hom_dims(x, y)


@given(complexes())
def test_identity_is_quasi_iso_and_cone_acyclic(c):
    f = ChainMap.identity(c)
    assert is_quasi_iso(f)
    assert is_acyclic(cone(f))


@given(complexes())
def test_fold_preserves_euler(c):
    assert fold(c).euler() == c.euler()
    assert cohomology(fold(c)) == cohomology(c).fold()


@given(complexes(), complexes())
def test_quasi_iso_search_agrees_with_cohomology(x, y):
    found = find_quasi_iso(x, y)
    assert (found is not None) == (cohomology(x) == cohomology(y))
    if found is not None:
        assert is_quasi_iso(found)


def test_are_quasi_isomorphic():
    one = ExactMatrix.from_dense([[1]])
    acyclic = Complex({0: 1, 1: 1}, {0: one})
    assert are_quasi_isomorphic(direct_sum(point(), acyclic), point())
    assert not are_quasi_isomorphic(point(), point(degree=1))


def test_mod2_complex_and_unfurl():
    one = ExactMatrix.from_dense([[1]])
    c = Complex({0: 1, 1: 1}, {0: one, 1: ExactMatrix.zero(1, 1)}, grading=MOD2)
    assert is_acyclic(c)
    u = unfurl(fold(point()), -2, 2)
    assert cohomology(u).dims == {-2: 1, 0: 1, 2: 1}
    with pytest.raises(GradingMismatch):
        HomComplex(c, point())


def test_representatives_and_class_rank():
    c = direct_sum(point(), point())
    reps = cohomology_representatives(c, 0)
    assert len(reps) == 2
    assert class_rank(c, 0, reps) == 2
    assert class_rank(c, 0, [reps[0], reps[0]]) == 1


def test_hom_complex_degree_range():
    h = HomComplex(point(degree=1), point(degree=3))
    assert h.degrees == [2]
    assert h.cohomology().dims == {2: 1}
    assert GradedSpace(INTEGERS, {}).euler() == 0
